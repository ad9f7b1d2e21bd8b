//! Small canonical instances shared by tests, the harness and the CLI.

use std::sync::Arc;

use crate::groupoid::FiniteGroupoid;
use crate::linalg::{q, qr, Matrix, Rational};
use crate::ruth::{gauge_transport, Ruth};
use crate::twoterm::TwoTermComplex;

/// `Z/2` acting on `ℚ → ℚ` (zero differential) by the sign, with
/// `Ω_{g,g} = w` and `Ω` zero at unit pairs.
pub fn z2_ruth(w: Rational) -> Ruth {
    z2_with(-1, -1, w)
}

/// The `Z/2` instance with `λ¹_g = 1` and `Ω_{g,g} = 1`: the first three
/// identities hold and the fourth fails at `(g, g, g)`.
pub fn z2_ruth_broken4() -> Ruth {
    z2_with(-1, 1, q(1))
}

fn z2_with(l0: i64, l1: i64, w: Rational) -> Ruth {
    let g = Arc::new(FiniteGroupoid::cyclic(2));
    let complex = Arc::new(TwoTermComplex::new(vec!["*".into()], vec![Matrix::zeros(1, 1)]).expect("complex"));
    let lam = |v: i64| {
        (0..g.num_arrows())
            .map(|a| if g.is_unit(a) { Matrix::identity(1) } else { Matrix::scalar(1, q(v)) })
            .collect::<Vec<_>>()
    };
    let gen = g.arrow_id("g").expect("generator");
    let omega = g
        .pairs()
        .iter()
        .map(|&(a, b)| if a == gen && b == gen { Matrix::scalar(1, w.clone()) } else { Matrix::zeros(1, 1) })
        .collect();
    Ruth::new(g.clone(), complex, lam(l0), lam(l1), omega).expect("well-shaped")
}

/// A strict representation of the pair groupoid on `{x, y}` with
/// `E⁰ = ℚ`, `E¹ = ℚ²` and `δ = (1, 0)ᵀ`; `a` scales the second
/// coordinate of `E¹` by 2.
pub fn pair_strict_ruth() -> Ruth {
    let g = Arc::new(FiniteGroupoid::pair_xy());
    let d = Matrix::from_ints(&[&[1], &[0]]);
    let complex = Arc::new(TwoTermComplex::new(vec!["x".into(), "y".into()], vec![d.clone(), d]).expect("complex"));
    let mut l1 = Vec::new();
    for name in g.arrows() {
        l1.push(match name.as_str() {
            "a" => Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(2)]]),
            "b" => Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), qr(1, 2)]]),
            _ => Matrix::identity(2),
        });
    }
    let l0 = vec![Matrix::identity(1); g.num_arrows()];
    Ruth::strict(g, complex, l0, l1).expect("well-shaped")
}

/// [`pair_strict_ruth`] transported along a gauge with nonzero `μ`, which
/// gives a representation with nonzero curvature.
pub fn pair_ruth() -> Ruth {
    let target = Arc::new(pair_strict_ruth());
    let g = target.groupoid();
    let phi0 = vec![Matrix::scalar(1, q(2)), Matrix::identity(1)];
    let phi1 = vec![Matrix::from_ints(&[&[1, 1], &[0, 1]]), Matrix::identity(2)];
    let mu = g
        .arrows()
        .iter()
        .map(|name| match name.as_str() {
            "a" => Matrix::from_ints(&[&[0, 1]]),
            "b" => Matrix::from_ints(&[&[1, -1]]),
            _ => Matrix::zeros(1, 2),
        })
        .collect::<Vec<_>>();
    let (source, _) = gauge_transport(&target, &phi0, &phi1, &mu).expect("invertible gauge");
    Arc::try_unwrap(source).unwrap_or_else(|a| (*a).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ruth::validate_ruth;

    #[test]
    fn fixtures_are_valid() {
        for r in [z2_ruth(q(0)), z2_ruth(q(1)), pair_strict_ruth(), pair_ruth()] {
            let rep = validate_ruth(&r);
            assert!(rep.passed(), "{rep}");
        }
        assert!(!pair_ruth().is_strict());
    }

    #[test]
    fn broken_fixture_fails_only_identity_four() {
        let rep = validate_ruth(&z2_ruth_broken4());
        assert_eq!(rep.failed_checks(), vec!["identity(4)"]);
        assert_eq!(rep.entries.len(), 1);
        assert_eq!(rep.entries[0].location, "(g,g,g)");
    }
}
