use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rational::{frac, serde_rational};
use crate::linalg::Rational;

/// A monodromy eigenvalue `e^{2πiβ}` with multiplicity. Residues of the
/// Higgs field are nilpotent, so the eigenvalue of the residue and the
/// parabolic part of the filtered local system are both zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonodromyDatum {
    #[serde(with = "serde_rational")]
    pub angle: Rational,
    pub multiplicity: usize,
}

impl MonodromyDatum {
    /// Reduces `angle` into `[0, 1)`.
    pub fn new(angle: Rational, multiplicity: usize) -> Self {
        MonodromyDatum { angle: frac(&angle), multiplicity }
    }

    pub fn is_unipotent(&self) -> bool {
        self.angle == Rational::from_integer(0.into())
    }

    /// `(cos 2πβ, sin 2πβ)` for display.
    pub fn eigenvalue(&self) -> (f64, f64) {
        let a = 2.0 * std::f64::consts::PI * self.angle.to_f64().unwrap_or(0.0);
        (a.cos(), a.sin())
    }
}

/// The parabolic weight `β ∈ [0, 1)` with `m = e^{2πiβ}`.
pub fn weight_from_monodromy(m: &MonodromyDatum) -> Rational {
    frac(&m.angle)
}

pub fn monodromy_from_weight(beta: &Rational, multiplicity: usize) -> Result<MonodromyDatum> {
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    if *beta < zero || *beta >= one {
        return Err(Error::Validation { path: "weight".into(), message: format!("{beta} is not in [0, 1)") });
    }
    Ok(MonodromyDatum::new(beta.clone(), multiplicity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, q};

    #[test]
    fn table_rows() {
        assert_eq!(weight_from_monodromy(&MonodromyDatum::new(int(0), 1)), int(0));
        assert_eq!(weight_from_monodromy(&MonodromyDatum::new(q(1, 2), 1)), q(1, 2));
        assert_eq!(monodromy_from_weight(&q(1, 3), 2).unwrap().angle, q(1, 3));
        let (c, s) = MonodromyDatum::new(q(1, 2), 1).eigenvalue();
        assert!((c + 1.0).abs() < 1e-12 && s.abs() < 1e-12);
    }

    #[test]
    fn angles_reduce_mod_one() {
        assert_eq!(MonodromyDatum::new(q(7, 3), 1).angle, q(1, 3));
        assert_eq!(MonodromyDatum::new(q(-1, 4), 1).angle, q(3, 4));
        assert!(monodromy_from_weight(&int(1), 1).is_err());
    }
}
