use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::subspace::Subspace;
use super::GfqError;

/// A chain of nested subspaces with strictly increasing dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Subspace>", into = "Vec<Subspace>")]
pub struct Flag {
    parts: Vec<Subspace>,
}

impl Flag {
    pub fn new(parts: Vec<Subspace>) -> Result<Flag, GfqError> {
        for w in parts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.ambient_dim() != b.ambient_dim() || a.q() != b.q() {
                return Err(GfqError::AmbientMismatch {
                    left: (a.ambient_dim(), a.q()),
                    right: (b.ambient_dim(), b.q()),
                });
            }
            if a.dim() >= b.dim() {
                return Err(GfqError::InvalidDims(format!("dimensions {} and {} do not increase", a.dim(), b.dim())));
            }
            if !b.contains(a) {
                return Err(GfqError::InvalidDims(format!(
                    "dim-{} part is not inside the dim-{} part",
                    a.dim(),
                    b.dim()
                )));
            }
        }
        Ok(Flag { parts })
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(Subspace::dim).collect()
    }

    pub fn get(&self, i: usize) -> Option<&Subspace> {
        self.parts.get(i)
    }
}

impl TryFrom<Vec<Subspace>> for Flag {
    type Error = GfqError;

    fn try_from(parts: Vec<Subspace>) -> Result<Self, Self::Error> {
        Flag::new(parts)
    }
}

impl From<Flag> for Vec<Subspace> {
    fn from(f: Flag) -> Self {
        f.parts
    }
}

/// Pseudo-random flag with the requested dimensions; a given seed always
/// yields the same flag.
pub fn build_flag(n: usize, field: &Field, dims: &[usize], seed: u64) -> Result<Flag, GfqError> {
    if dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GfqError::InvalidDims(format!("dimensions {dims:?} are not strictly increasing")));
    }
    if dims.last().is_some_and(|&d| d > n) {
        return Err(GfqError::InvalidDims(format!("dimensions {dims:?} exceed n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = Subspace::zero(field, n);
    let mut parts = Vec::with_capacity(dims.len());
    for &d in dims {
        cur = cur.extend_randomly(d, &mut rng)?;
        parts.push(cur.clone());
    }
    Flag::new(parts)
}
