//! Random integer instances.
//!
//! Every entry is independently finite with probability `density / 100`;
//! finite entries are uniform integers in `[-range, range]`. Non-finite
//! entries are `+inf` in `q` and `-inf` everywhere else.
//!
//! ```
//! use tropopt::generate::{gen_random, GenConfig};
//!
//! let cfg = GenConfig { n: 3, m: 2, range: 10, density: 100, seed: 7, quadratic: false };
//! assert_eq!(gen_random(&cfg).unwrap(), gen_random(&cfg).unwrap());
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::Problem;
use crate::matrix::{TropMatrix, Typing};
use crate::pseudolinear::PseudolinearProblem;
use crate::pseudoquadratic::PseudoquadraticProblem;
use crate::scalar::ExtScalar;

/// Parameters of [`gen_random`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    /// Variables.
    pub n: usize,
    /// Constraints.
    pub m: usize,
    /// Finite entries lie in `[-range, range]`.
    pub range: i64,
    /// Percentage of finite entries, in `1..=100`.
    pub density: u32,
    pub seed: u64,
    /// Also draw the `n x n` matrix `C`.
    pub quadratic: bool,
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidParameter("n and m must be at least 1".into()));
        }
        if self.density == 0 || self.density > 100 {
            return Err(Error::InvalidParameter(format!("density must be in 1..=100, got {}", self.density)));
        }
        if self.range < 1 {
            return Err(Error::InvalidParameter(format!("range must be at least 1, got {}", self.range)));
        }
        Ok(())
    }
}

struct Draw<'a> {
    rng: &'a mut ChaCha8Rng,
    range: i64,
    p: f64,
}

impl Draw<'_> {
    fn entry(&mut self, missing: ExtScalar) -> ExtScalar {
        if self.rng.gen_bool(self.p) {
            ExtScalar::int(self.rng.gen_range(-self.range..=self.range))
        } else {
            missing
        }
    }

    fn vector(&mut self, len: usize, missing: ExtScalar) -> Vec<ExtScalar> {
        (0..len).map(|_| self.entry(missing.clone())).collect()
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> TropMatrix {
        let entries = self.vector(rows * cols, ExtScalar::NegInf);
        TropMatrix::new(rows, cols, Typing::MaxPlus, entries).expect("shape")
    }
}

/// Draws an instance; deterministic in `cfg`.
pub fn gen_random(cfg: &GenConfig) -> Result<Problem> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut draw = Draw { rng: &mut rng, range: cfg.range, p: f64::from(cfg.density) / 100.0 };
    let (n, m) = (cfg.n, cfg.m);
    let u = draw.matrix(m, n);
    let v = draw.matrix(m, n);
    let b = draw.vector(m, ExtScalar::NegInf);
    let d = draw.vector(m, ExtScalar::NegInf);
    let p = draw.vector(n, ExtScalar::NegInf);
    let q = draw.vector(n, ExtScalar::PosInf);
    let base = PseudolinearProblem::new(u, v, b, d, p, q)?;
    if cfg.quadratic {
        let c = draw.matrix(n, n);
        Ok(Problem::Quadratic(PseudoquadraticProblem::new(base, c)?))
    } else {
        Ok(Problem::Linear(base))
    }
}
