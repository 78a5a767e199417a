//! Randomized polynomial identity testing.
//!
//! The expression under test is any lazily evaluable polynomial function
//! of the parameters; only a total degree bound is required. A nonzero
//! evaluation is a sound counterexample. If every trial evaluates to
//! zero the verdict carries the exact failure probability bound
//! (d/S)^trials. Offered over the infinite fields only: over GF(p) the
//! formal/functional gap makes sampling the wrong tool.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{FieldTag, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum SzVerdict {
    /// All trials evaluated to zero; wrong with probability at most
    /// `failure_bound`.
    ZeroWithConfidence { trials: u32, failure_bound: BigRational },
    /// A point where the expression is nonzero: a sound witness.
    NonzeroWitness { point: Vec<Scalar>, value: Scalar },
}

pub struct SzConfig {
    pub nvars: usize,
    pub degree_bound: u32,
    pub trials: u32,
    pub sample_size: u64,
    pub field: FieldTag,
    pub seed: u64,
}

/// Each trial draws its point from an independent PRNG stream
/// (seed fixed, stream = trial index), so trials can run in any order.
pub fn schwartz_zippel_test(
    expr: impl Fn(&[Scalar]) -> Scalar,
    cfg: &SzConfig,
) -> Result<SzVerdict> {
    if cfg.field.is_finite() {
        return Err(Error::InvalidInput(
            "Schwartz-Zippel sampling is only offered over infinite fields".into(),
        ));
    }
    if cfg.sample_size <= cfg.degree_bound as u64 {
        return Err(Error::SampleSetTooSmall {
            degree: cfg.degree_bound,
            size: cfg.sample_size,
        });
    }
    for trial in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial as u64);
        let point: Vec<Scalar> = (0..cfg.nvars)
            .map(|_| Scalar::from_int(rng.gen_range(0..cfg.sample_size) as i64, &cfg.field))
            .collect();
        let value = expr(&point);
        if !value.is_zero() {
            return Ok(SzVerdict::NonzeroWitness { point, value });
        }
    }
    let per_trial = BigRational::new(
        BigInt::from(cfg.degree_bound),
        BigInt::from(cfg.sample_size),
    );
    let mut failure_bound = BigRational::one();
    for _ in 0..cfg.trials {
        failure_bound *= &per_trial;
    }
    Ok(SzVerdict::ZeroWithConfidence {
        trials: cfg.trials,
        failure_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::subspace::AffineSubspace;

    #[test]
    fn single_variable_is_caught() {
        let cfg = SzConfig {
            nvars: 1,
            degree_bound: 1,
            trials: 1,
            sample_size: 100,
            field: FieldTag::Q,
            seed: 42,
        };
        // expression = t1: one nonzero draw suffices with prob >= 0.99
        match schwartz_zippel_test(|p| p[0].clone(), &cfg).unwrap() {
            SzVerdict::NonzeroWitness { value, .. } => assert!(!value.is_zero()),
            SzVerdict::ZeroWithConfidence { failure_bound, .. } => {
                // the only zero draw; bound must still be reported as 1/100
                assert_eq!(failure_bound, BigRational::new(1.into(), 100.into()));
            }
        }
    }

    #[test]
    fn nilpotency_defect_of_strictly_upper_space_is_zero() {
        let space = crate::nilpotency::witness_max_nilpotent(4, FieldTag::Q).unwrap();
        let g = space.generic_element();
        let n = g.n();
        let cfg = SzConfig {
            nvars: space.dim(),
            degree_bound: 2 * n as u32,
            trials: 20,
            sample_size: 1000,
            field: FieldTag::Q,
            seed: 7,
        };
        let defect = |point: &[Scalar]| -> Scalar {
            let m = space.element_at_point(point).unwrap();
            let chi = m.char_poly();
            let mut acc = num_rational::BigRational::from_integer(0.into());
            for k in 0..n {
                acc += chi.coeff(k).norm_rat().unwrap();
            }
            Scalar::Rat(acc)
        };
        match schwartz_zippel_test(defect, &cfg).unwrap() {
            SzVerdict::ZeroWithConfidence { trials, .. } => assert_eq!(trials, 20),
            SzVerdict::NonzeroWitness { .. } => panic!("defect of an all-nilpotent space"),
        }
    }

    #[test]
    fn char2_remark_space_lifted_to_q_has_nonzero_det() {
        // det(E12 + t(E12+E21)) = -t(1+t) over Q: nonzero, witness found
        let e12 = Matrix::<Scalar>::unit(2, FieldTag::Q, 0, 1);
        let dir = e12.add(&Matrix::unit(2, FieldTag::Q, 1, 0)).unwrap();
        let space = AffineSubspace::new(e12, vec![dir]).unwrap();
        let cfg = SzConfig {
            nvars: 1,
            degree_bound: 2,
            trials: 20,
            sample_size: 100,
            field: FieldTag::Q,
            seed: 3,
        };
        let det = |point: &[Scalar]| space.element_at_point(point).unwrap().det();
        match schwartz_zippel_test(det, &cfg).unwrap() {
            SzVerdict::NonzeroWitness { point, value } => {
                let m = space.element_at_point(&point).unwrap();
                assert_eq!(m.det(), value);
            }
            _ => panic!("determinant is a nonzero polynomial"),
        }
    }

    #[test]
    fn sample_set_must_exceed_degree() {
        let cfg = SzConfig {
            nvars: 1,
            degree_bound: 10,
            trials: 1,
            sample_size: 10,
            field: FieldTag::Q,
            seed: 0,
        };
        assert!(matches!(
            schwartz_zippel_test(|p| p[0].clone(), &cfg),
            Err(Error::SampleSetTooSmall { .. })
        ));
    }

    #[test]
    fn refuses_finite_fields() {
        let cfg = SzConfig {
            nvars: 1,
            degree_bound: 1,
            trials: 1,
            sample_size: 100,
            field: FieldTag::Gf(5),
            seed: 0,
        };
        assert!(schwartz_zippel_test(|p| p[0].clone(), &cfg).is_err());
    }

    #[test]
    fn soundness_on_formally_zero_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for round in 0..100 {
            // p - p for a random small polynomial p, evaluated lazily
            let coeffs: Vec<(i64, u32, u32)> = (0..4)
                .map(|_| (rng.gen_range(-5..=5), rng.gen_range(0..3), rng.gen_range(0..3)))
                .collect();
            let eval_p = move |pt: &[Scalar]| -> Scalar {
                let mut acc = Scalar::zero(&FieldTag::Q);
                for &(c, e1, e2) in &coeffs {
                    let mut term = Scalar::from_int(c, &FieldTag::Q);
                    for _ in 0..e1 {
                        term = &term * &pt[0];
                    }
                    for _ in 0..e2 {
                        term = &term * &pt[1];
                    }
                    acc = &acc + &term;
                }
                acc
            };
            let cfg = SzConfig {
                nvars: 2,
                degree_bound: 4,
                trials: 3,
                sample_size: 50,
                field: FieldTag::Q,
                seed: round,
            };
            let diff = |pt: &[Scalar]| &eval_p(pt) - &eval_p(pt);
            match schwartz_zippel_test(diff, &cfg).unwrap() {
                SzVerdict::ZeroWithConfidence { .. } => {}
                SzVerdict::NonzeroWitness { .. } => panic!("claimed nonzero for p - p"),
            }
        }
    }
}
