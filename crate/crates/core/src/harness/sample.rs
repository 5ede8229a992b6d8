//! Seeded sampling of polynomials with smooth leading form.
//!
//! Every draw uses ChaCha8 seeded from `seed` and switched to stream
//! `attempt`, so a sample depends only on `(seed, attempt)` and the
//! parameters, on every platform.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{FieldDesc, FqElem, FqPolynomial};
use crate::error::{Error, Result};
use crate::lattice::simplex_points;

pub const RETRY_CAP: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// Uniform coefficients on every nonconstant monomial; for `n >= 3` the
    /// leading form is diagonal so that smoothness is decidable.
    Generic,
    /// `n = 2`, `d` even: leading form `A x^d + B x^{d/2} y^{d/2} + C y^d`.
    TrinomialLeading,
}

fn random_elem(field: &FieldDesc, rng: &mut ChaCha8Rng) -> FqElem {
    field.decode(rng.gen_range(0..field.order()))
}

fn random_nonzero(field: &FieldDesc, rng: &mut ChaCha8Rng) -> FqElem {
    field.decode(rng.gen_range(1..field.order()))
}

fn draw(n: u64, d: u64, field: &FieldDesc, shape: Shape, rng: &mut ChaCha8Rng) -> Result<FqPolynomial> {
    let mut f = FqPolynomial::new(n, d, field.clone())?;
    let half = (d / 2) as u32;
    for w in simplex_points(n, d)? {
        let j = w.sum();
        if j == 0 {
            continue;
        }
        let c = if j < d {
            random_elem(field, rng)
        } else {
            let axis = w.0.iter().filter(|&&x| x != 0).count() == 1;
            let keep = match shape {
                Shape::Generic => n <= 2 || axis,
                Shape::TrinomialLeading => axis || w.0 == [half, half],
            };
            if !keep {
                continue;
            }
            random_elem(field, rng)
        };
        f.set(w, c)?;
    }
    Ok(f)
}

/// A polynomial of the given shape whose leading form is smooth, found by
/// rejection sampling.
pub fn sample_smooth(n: u64, d: u64, field: &FieldDesc, seed: u64, shape: Shape) -> Result<FqPolynomial> {
    if shape == Shape::TrinomialLeading && (n != 2 || !d.is_multiple_of(2)) {
        return Err(Error::param(format!(
            "trinomial leading forms need n = 2 and even d, got n = {n}, d = {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..RETRY_CAP {
        rng.set_stream(attempt as u64);
        rng.set_word_pos(0);
        let f = draw(n, d, field, shape, &mut rng)?;
        if f.is_smooth()? {
            return Ok(f);
        }
    }
    Err(Error::RetryCapExhausted(RETRY_CAP))
}

/// `F_q` elements drawn from a seeded stream, for property checks.
pub fn random_elements(field: &FieldDesc, seed: u64, count: usize, nonzero: bool) -> Vec<FqElem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            if nonzero {
                random_nonzero(field, &mut rng)
            } else {
                random_elem(field, &mut rng)
            }
        })
        .collect()
}

pub(crate) fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
