//! Extremal size bounds for reachability preservers.
//!
//! `bound_source_restricted` evaluates `⌈c·(n + sqrt(n·p·s))⌉` and
//! `bound_pairwise` evaluates `⌈c·(n + (n·p)^{2/3})⌉`, both in exact integer
//! arithmetic: the irrational part is bracketed by integer roots so the
//! ceiling is never subject to floating-point rounding.

use num_integer::Roots;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Which bound formula applies to an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    SourceRestricted,
    Pairwise,
}

/// A bound formula instantiated on concrete parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub kind: BoundKind,
    /// The leading constant, exact.
    pub constant: Ratio<u64>,
    /// The computed bound value.
    pub value: u64,
}

impl BoundSpec {
    pub fn source_restricted(n: u64, p: u64, s: u64, c: Ratio<u64>) -> Self {
        BoundSpec {
            kind: BoundKind::SourceRestricted,
            constant: c,
            value: bound_source_restricted(n, p, s, c),
        }
    }

    pub fn pairwise(n: u64, p: u64, c: Ratio<u64>) -> Self {
        BoundSpec {
            kind: BoundKind::Pairwise,
            constant: c,
            value: bound_pairwise(n, p, c),
        }
    }
}

/// `⌈c·(n + sqrt(n·p·s))⌉`, exact.
pub fn bound_source_restricted(n: u64, p: u64, s: u64, c: Ratio<u64>) -> u64 {
    let radicand = u128::from(n) * u128::from(p) * u128::from(s);
    ceil_scaled_plus_root(n, radicand, Root::Square, c)
}

/// `⌈c·(n + (n·p)^{2/3})⌉`, exact.
pub fn bound_pairwise(n: u64, p: u64, c: Ratio<u64>) -> u64 {
    let np = u128::from(n) * u128::from(p);
    // (np)^{2/3} = ((np)^2)^{1/3}; np ≤ 2^128/np keeps the square in range
    // for every desk-scale input (np < 2^42 covers n, p ≤ 2^21 each).
    let radicand = np.checked_mul(np).expect("n*p too large for exact bound");
    ceil_scaled_plus_root(n, radicand, Root::Cube, c)
}

enum Root {
    Square,
    Cube,
}

/// Exact `⌈(a/b)·(n + radicand^{1/k})⌉` for k ∈ {2, 3}.
///
/// Uses `floor((a/b)·x) = floor(floor((a^k·radicand)^{1/k}) stuff)` style
/// bracketing: with `A = a·n + floor((a^k·radicand)^{1/k})`, the true value
/// `(a·n + a·radicand^{1/k})/b` lies in `[A/b, (A+1)/b)`; when the root is
/// exact the value is rational and the ceiling is computed directly,
/// otherwise it is `floor(A/b) + 1`.
fn ceil_scaled_plus_root(n: u64, radicand: u128, root: Root, c: Ratio<u64>) -> u64 {
    let a = u128::from(*c.numer());
    let b = u128::from(*c.denom());
    assert!(b > 0, "constant must be positive");
    let (floor_root, exact) = match root {
        Root::Square => {
            let scaled = a * a * radicand;
            let fr = scaled.sqrt();
            (fr, fr * fr == scaled)
        }
        Root::Cube => {
            let scaled = a
                .checked_mul(a)
                .and_then(|x| x.checked_mul(a))
                .and_then(|x| x.checked_mul(radicand))
                .expect("bound radicand overflow");
            let fr = scaled.cbrt();
            (fr, fr * fr * fr == scaled)
        }
    };
    let numer = a * u128::from(n) + floor_root;
    let value = if exact {
        // Rational value numer/b: ordinary ceiling division.
        numer.div_ceil(b)
    } else {
        // Irrational value strictly inside (numer/b, (numer+1)/b): the open
        // unit interval (numer, numer+1) contains no integer, so the ceiling
        // of value/b is floor(numer/b) + 1.
        numer / b + 1
    };
    u64::try_from(value).expect("bound exceeds u64")
}

/// Exact check of the preprocessing identity `p · (n^{2/3} / p^{1/3}) =
/// (n·p)^{2/3}`: both sides cubed agree as integers.
pub fn preprocessing_budget_identity(n: u64, p: u64) -> bool {
    if p == 0 {
        return true;
    }
    // (p · n^{2/3} / p^{1/3})^3 = p^3 · n^2 / p = p^2 n^2 = ((np)^{2/3})^3.
    let lhs = u128::from(p).pow(3) * u128::from(n).pow(2) / u128::from(p);
    let rhs = (u128::from(n) * u128::from(p)).pow(2);
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Ratio<u64> {
        Ratio::new(1, 1)
    }

    #[test]
    fn source_restricted_balanced_regime() {
        // s = n^{1/3}, p = n^{2/3}: sqrt(n·p·s) = n, so the bound is 2n.
        assert_eq!(bound_source_restricted(4096, 256, 16, one()), 8192);
    }

    #[test]
    fn source_restricted_empty_demand() {
        assert_eq!(bound_source_restricted(100, 0, 0, one()), 100);
    }

    #[test]
    fn source_restricted_irrational_root() {
        // sqrt(5000) ≈ 70.71, ceil(100 + sqrt(5000)) = 171.
        assert_eq!(bound_source_restricted(100, 10, 5, one()), 171);
    }

    #[test]
    fn pairwise_trivial_and_exact_cube() {
        assert_eq!(bound_pairwise(1000, 0, one()), 1000);
        // (64 · 64)^{2/3} = 4096^{2/3} = 256.
        assert_eq!(bound_pairwise(64, 64, one()), 320);
    }

    #[test]
    fn pairwise_sqrt_n_boundary() {
        // p = sqrt(n): (n·p)^{2/3} = n, the edge of the O(n) regime.
        assert_eq!(bound_pairwise(1_000_000, 1_000, one()), 2_000_000);
    }

    #[test]
    fn rational_constants_are_exact() {
        // c = 3/2 on the balanced power-of-two regime: 3/2 · 8192 = 12288.
        let c = Ratio::new(3, 2);
        assert_eq!(bound_source_restricted(4096, 256, 16, c), 12288);
        // c = 1/3 with an irrational root: value = (100 + sqrt(5000))/3
        // = 56.90..., ceiling 57.
        let c = Ratio::new(1, 3);
        assert_eq!(bound_source_restricted(100, 10, 5, c), 57);
    }

    #[test]
    fn bounds_match_float_reference() {
        // The exact ceiling never differs from a float evaluation by more
        // than the float's own rounding slop.
        for n in [0u64, 1, 7, 100, 4096, 99991] {
            for p in [0u64, 1, 13, 500] {
                for s in [0u64, 1, 5, 64] {
                    let exact = bound_source_restricted(n, p, s, Ratio::new(1, 1));
                    let float = (n as f64 + ((n * p * s) as f64).sqrt()).ceil() as u64;
                    assert!(
                        exact.abs_diff(float) <= 1,
                        "n={n} p={p} s={s}: exact {exact} vs float {float}"
                    );
                }
                let exact = bound_pairwise(n, p, Ratio::new(1, 1));
                let float = (n as f64 + ((n * p) as f64).powf(2.0 / 3.0)).ceil() as u64;
                assert!(
                    exact.abs_diff(float) <= 1,
                    "n={n} p={p}: exact {exact} vs float {float}"
                );
            }
        }
    }

    #[test]
    fn preprocessing_identity_holds() {
        for n in [1u64, 8, 27, 100, 4096] {
            for p in [1u64, 8, 27, 216] {
                assert!(preprocessing_budget_identity(n, p), "n={n} p={p}");
            }
        }
    }
}
