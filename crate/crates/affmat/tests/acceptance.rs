//! Acceptance suite: every dimension-bound theorem, lemma identity and
//! construction this library exists for, run end to end at desk scale
//! with exact arithmetic (tolerances appear only in the numeric
//! eigenpath and are pinned here). One pass/fail line per criterion.

use std::time::Instant;

use affmat::diag::{self, SampleVerdict};
use affmat::eigen::simultaneous_diagonalize_exact;
use affmat::matrix::Matrix;
use affmat::nilpotency::{self, NilpotencyVerdict};
use affmat::normality::{self, NormalVerdict, SimDiagMode};
use affmat::oracle::{self, OracleDomain, OracleProperty};
use affmat::scalar::{FieldTag, Scalar};
use affmat::subspace::AffineSubspace;
use affmat::{berkowitz, faddeev_leverrier, Method};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NUMERIC_TOL: f64 = 1e-9;

fn pass(id: u32, name: &str) {
    println!("acceptance {id} ({name}): PASS");
}

fn random_int_matrix(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix<Scalar> {
    Matrix::from_fn(n, FieldTag::Q, |_, _| {
        Scalar::from_int(rng.gen_range(-bound..=bound), &FieldTag::Q)
    })
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Scalar> {
    loop {
        let c = random_int_matrix(rng, n, 3);
        if !c.det().is_zero() {
            return c;
        }
    }
}

fn random_strictly_upper(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Scalar> {
    Matrix::from_fn(n, FieldTag::Q, |i, j| {
        Scalar::from_int(if j > i { rng.gen_range(-3..=3) } else { 0 }, &FieldTag::Q)
    })
}

#[test]
fn acceptance_01_gerstenhaber_witness() {
    let start = Instant::now();
    for n in 2..=6 {
        let s = nilpotency::witness_max_nilpotent(n, FieldTag::Q).unwrap();
        let cert = nilpotency::certify_nilpotent(&s).unwrap();
        assert_eq!(cert.verdict, NilpotencyVerdict::AllNilpotent, "n = {n}");
        assert_eq!(cert.method, Method::Symbolic);
        assert_eq!(cert.bound_check.dim, n * (n - 1) / 2);
        assert_eq!(cert.bound_check.bound, n * (n - 1) / 2);
        assert!(cert.bound_check.satisfied);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    pass(1, "max nilpotent witness n=2..6, symbolic, within 60 s");
}

#[test]
fn acceptance_02_affine_not_linear_nilpotent_bound() {
    for n in 2..=5 {
        let s = nilpotency::witness_affine_not_linear_nilpotent(n, FieldTag::Q).unwrap();
        let cert = nilpotency::certify_nilpotent(&s).unwrap();
        assert_eq!(cert.verdict, NilpotencyVerdict::AllNilpotent, "n = {n}");
        assert!(!s.is_linear());
        assert_eq!(s.dim(), n * (n - 1) / 2 - 1);
        assert_eq!(cert.bound_check.refined_bound, Some(n * (n - 1) / 2 - 1));
        assert!(cert.bound_check.satisfied);
        assert!(nilpotency::check_span_nilpotent_consequence(&s).unwrap());
    }
    pass(2, "affine-not-linear witness meets the refined bound, span consequence holds");
}

#[test]
fn acceptance_03_char2_remark() {
    let s = nilpotency::char2_counterexample();
    let tag = FieldTag::Gf(2);
    let elements: Vec<Matrix<Scalar>> = s.enumerate(100).unwrap().map(|(_, m)| m).collect();
    assert_eq!(elements.len(), 2);
    assert!(elements.contains(&Matrix::unit(2, tag, 0, 1)));
    assert!(elements.contains(&Matrix::unit(2, tag, 1, 0)));
    for m in &elements {
        assert!(m.is_nilpotent());
    }
    assert_eq!(s.dim(), 1);
    assert_eq!(s.dim(), s.n() * (s.n() - 1) / 2);
    assert!(!s.is_linear());
    let cert = nilpotency::certify_nilpotent(&s).unwrap();
    assert_eq!(cert.verdict, NilpotencyVerdict::AllNilpotent);
    // the char-0 refinement must NOT be applied here
    assert_eq!(cert.bound_check.refined_bound, None);
    assert!(cert.bound_check.satisfied);
    let report = cert.to_report(&s);
    assert!(report.notes.iter().any(|n| n.contains("refined bound not applicable")));
    pass(3, "char-2 space is exactly {E12, E21}, both nilpotent, dim 1, refined bound not applicable");
}

#[test]
fn acceptance_04_s2_identity_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut equal = 0u32;
    for trial in 0..1000 {
        let n = 2 + (trial % 4); // 2..5
        let r = random_int_matrix(&mut rng, n, 4);
        let c = random_invertible(&mut rng, n);
        let u = c
            .matmul(&random_strictly_upper(&mut rng, n))
            .unwrap()
            .matmul(&c.inverse().unwrap())
            .unwrap();
        let chk = nilpotency::check_s2_identity(&r, &u).unwrap();
        if chk.equal {
            equal += 1;
        }
    }
    assert_eq!(equal, 1000, "S2 identity failed on {} pairs", 1000 - equal);
    pass(4, "S2(R) - S2(R+U) = tr(RU) on 1000/1000 random pairs");
}

#[test]
fn acceptance_05_trace_pairing_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut zero = 0u32;
    for trial in 0..500 {
        let n = 3 + (trial % 2) as usize; // 3..4
        let p = random_strictly_upper(&mut rng, n);
        let a = random_strictly_upper(&mut rng, n);
        let b = random_strictly_upper(&mut rng, n);
        // half the triples are conjugated by a shared invertible matrix,
        // which preserves every hypothesis and the conclusion
        let (p, a, b) = if trial % 2 == 0 {
            (p, a, b)
        } else {
            let c = random_invertible(&mut rng, n);
            let cinv = c.inverse().unwrap();
            let conj = |m: &Matrix<Scalar>| c.matmul(m).unwrap().matmul(&cinv).unwrap();
            (conj(&p), conj(&a), conj(&b))
        };
        let t = nilpotency::trace_pairing(&p, &a, &b).unwrap();
        if t.is_zero() {
            zero += 1;
        }
    }
    assert_eq!(zero, 500);
    pass(5, "tr(AB) = 0 on 500/500 hypothesis-verified triples");
}

#[test]
fn acceptance_06_normal_bound() {
    for n in 2..=6 {
        let s = normality::diagonal_space(n, FieldTag::Qi).unwrap();
        for method in [Method::Symbolic, Method::PairwiseCertificate] {
            let cert = normality::certify_normal_with(&s, method).unwrap();
            assert_eq!(cert.verdict, NormalVerdict::AllNormal, "diagonal n = {n}");
            assert_eq!(cert.bound_check.dim, n);
            assert!(cert.bound_check.satisfied);
        }
    }
    for n in 2..=5 {
        let s = normality::circulant_space(n, FieldTag::Qi).unwrap();
        assert_eq!(s.dim(), n);
        for method in [Method::Symbolic, Method::PairwiseCertificate] {
            let cert = normality::certify_normal_with(&s, method).unwrap();
            assert_eq!(cert.verdict, NormalVerdict::AllNormal, "circulant n = {n}");
        }
    }
    let s = normality::affine_symmetric_2x2();
    assert_eq!(s.dim(), 2);
    assert!(!s.is_linear());
    assert!(!s.membership(&Matrix::zero(2, FieldTag::Q)).unwrap());
    for method in [Method::Symbolic, Method::PairwiseCertificate] {
        let cert = normality::certify_normal_with(&s, method).unwrap();
        assert_eq!(cert.verdict, NormalVerdict::AllNormal);
    }
    // the two certificates agree on 100 random small spaces as well
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for round in 0..100 {
        let tag = if round % 2 == 0 { FieldTag::Q } else { FieldTag::Qi };
        let n = rng.gen_range(2..=3);
        let h = rng.gen_range(1..=2);
        let space = if round % 5 == 0 {
            // positive case: polynomials in one normal matrix
            let d = Matrix::from_fn(n, tag, |i, j| {
                Scalar::from_int(if i == j { rng.gen_range(-2..=2) } else { 0 }, &tag)
            });
            let gens = vec![Matrix::identity(n, tag), d.clone()];
            AffineSubspace::new(d.matmul(&d).unwrap(), gens).unwrap()
        } else {
            let base = Matrix::from_fn(n, tag, |_, _| Scalar::from_int(rng.gen_range(-2..=2), &tag));
            let gens = (0..h)
                .map(|_| Matrix::from_fn(n, tag, |_, _| Scalar::from_int(rng.gen_range(-2..=2), &tag)))
                .collect();
            AffineSubspace::new(base, gens).unwrap()
        };
        let sym = normality::certify_normal_with(&space, Method::Symbolic).unwrap();
        let pair = normality::certify_normal_with(&space, Method::PairwiseCertificate).unwrap();
        assert_eq!(sym.verdict, pair.verdict, "round {round}");
    }
    pass(6, "normal bound: diagonals n=2..6, circulants n=2..5, affine 2x2; both certificates agree on 100 random spaces");
}

#[test]
fn acceptance_07_simultaneous_diagonalization() {
    // exact mode: 50 conjugated-diagonal families
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for family_idx in 0..50 {
        let n = rng.gen_range(2..=4);
        let c = random_invertible(&mut rng, n);
        let cinv = c.inverse().unwrap();
        let r = rng.gen_range(2..=3);
        let family: Vec<Matrix<Scalar>> = (0..r)
            .map(|_| {
                let d = Matrix::from_fn(n, FieldTag::Q, |i, j| {
                    Scalar::from_int(if i == j { rng.gen_range(-2..=2) } else { 0 }, &FieldTag::Q)
                });
                c.matmul(&d).unwrap().matmul(&cinv).unwrap()
            })
            .collect();
        let refinement = simultaneous_diagonalize_exact(&family).unwrap();
        // the basis must consist of exact common eigenvectors, verified
        // here independently of the refinement's own bookkeeping
        let promoted: Vec<Matrix<Scalar>> =
            family.iter().map(|m| m.promote_to_gauss().unwrap()).collect();
        let mut total_dim = 0;
        for block in &refinement.blocks {
            total_dim += block.basis.len();
            for v in &block.basis {
                for a in &promoted {
                    let av: Vec<Scalar> = (0..a.n())
                        .map(|i| {
                            let mut acc = Scalar::zero(&FieldTag::Qi);
                            for j in 0..a.n() {
                                acc = &acc + &(a.at(i, j) * &v[j]);
                            }
                            acc
                        })
                        .collect();
                    let pivot = v.iter().position(|x| !x.is_zero()).unwrap();
                    let lambda = av[pivot].div(&v[pivot]).unwrap();
                    for i in 0..a.n() {
                        assert_eq!(av[i], &lambda * &v[i], "family {family_idx}: not an exact eigenvector");
                    }
                }
            }
        }
        assert_eq!(total_dim, n);
    }

    // numeric mode: commuting normal families built as polynomials in one
    // normal matrix (symmetric, or antisymmetric for complex spectra)
    let mut rng = ChaCha8Rng::seed_from_u64(207);
    for family_idx in 0..10 {
        let n = rng.gen_range(2..=6);
        let a0 = if family_idx % 2 == 0 {
            let mut m = Matrix::zero(n, FieldTag::Q);
            for i in 0..n {
                for j in i..n {
                    let v = Scalar::from_int(rng.gen_range(-2..=2), &FieldTag::Q);
                    m.set(i, j, v.clone());
                    m.set(j, i, v);
                }
            }
            m
        } else {
            let mut m = Matrix::zero(n, FieldTag::Q);
            for i in 0..n {
                for j in i + 1..n {
                    let v = rng.gen_range(-2..=2);
                    m.set(i, j, Scalar::from_int(v, &FieldTag::Q));
                    m.set(j, i, Scalar::from_int(-v, &FieldTag::Q));
                }
            }
            m
        };
        let sq = a0.matmul(&a0).unwrap();
        let family = vec![
            a0.clone(),
            sq.clone(),
            a0.scale(&Scalar::from_int(3, &FieldTag::Q))
                .add(&sq)
                .unwrap()
                .add(&Matrix::identity(n, FieldTag::Q))
                .unwrap(),
        ];
        match normality::simultaneous_diagonalize(&family, SimDiagMode::Numeric).unwrap() {
            normality::EigenRefinement::Numeric(r) => {
                assert!(
                    r.max_residual <= NUMERIC_TOL,
                    "family {family_idx}: residual {}",
                    r.max_residual
                );
            }
            _ => unreachable!(),
        }
    }
    pass(7, "exact refinement gives exact common eigenvectors (50 families); numeric residuals <= 1e-9");
}

#[test]
fn acceptance_08_diagonalizable_bounds() {
    let samples = 10_000;
    let sym3 = diag::witness_max_diag_linear(3).unwrap();
    assert_eq!(sym3.dim(), 6);
    let cert = diag::sample_certify_diag_space(&sym3, samples, 108).unwrap();
    assert_eq!(cert.verdict, SampleVerdict::NoCounterexampleFound);
    assert_eq!(cert.samples_drawn, samples);
    assert!(cert.bound_check.satisfied);

    for n in 2..=4 {
        let s = diag::witness_max_diag_affine_not_linear(n).unwrap();
        assert_eq!(s.dim(), n * (n + 1) / 2 - 1);
        assert!(!s.is_linear());
        let cert = diag::sample_certify_diag_space(&s, samples, 108).unwrap();
        assert_eq!(cert.verdict, SampleVerdict::NoCounterexampleFound, "n = {n}");
        assert!(cert.bound_check.satisfied);
    }

    let remark = diag::remark_2x2_space();
    assert_eq!(remark.dim(), 3);
    let cert = diag::sample_certify_diag_space(&remark, samples, 108).unwrap();
    assert_eq!(cert.verdict, SampleVerdict::NoCounterexampleFound);

    // deliberately broken space: a nilpotent line
    let broken = AffineSubspace::linear(2, FieldTag::Q, vec![Matrix::unit(2, FieldTag::Q, 0, 1)])
        .unwrap();
    let cert = diag::sample_certify_diag_space(&broken, samples, 108).unwrap();
    assert_eq!(cert.verdict, SampleVerdict::Counterexample);
    assert_eq!(cert.samples_drawn, 1, "must fail within the first grid pass");
    pass(8, "diagonalizable witnesses clean over 10^4 samples; broken space caught on the first grid point");
}

#[test]
fn acceptance_09_pencil_escape() {
    let p = Matrix::<Scalar>::unit(2, FieldTag::Q, 0, 0);
    let y = Matrix::unit(2, FieldTag::Q, 0, 1)
        .sub(&Matrix::unit(2, FieldTag::Q, 1, 0))
        .unwrap();
    let esc = diag::antisymmetric_pencil_escape(&p, &y).unwrap();
    assert_eq!(esc.t, BigRational::from_integer(1.into()));
    let member = p.add(&y).unwrap();
    let chi = member.char_poly().to_unipoly();
    assert_eq!(chi.to_string(), "x^2 - x + 1");
    assert_eq!(esc.report.real_root_count, 0);

    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for case in 0..100 {
        let n = rng.gen_range(2..=4);
        let p = random_int_matrix(&mut rng, n, 3);
        let mut y = Matrix::zero(n, FieldTag::Q);
        loop {
            for i in 0..n {
                for j in i + 1..n {
                    let v = rng.gen_range(-3..=3);
                    y.set(i, j, Scalar::from_int(v, &FieldTag::Q));
                    y.set(j, i, Scalar::from_int(-v, &FieldTag::Q));
                }
            }
            if !y.is_zero() {
                break;
            }
        }
        let esc = diag::antisymmetric_pencil_escape(&p, &y);
        assert!(esc.is_ok(), "case {case}: no escape within budget");
    }
    pass(9, "pencil escape: t=1 with chi = x^2 - x + 1 on the worked example; 100/100 random escapes within budget");
}

#[test]
fn acceptance_10_oracle_cross_validation() {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let tag = FieldTag::Gf(3);
    let mut agreements = 0;
    for _ in 0..100 {
        let h = rng.gen_range(1..=2);
        let base = Matrix::from_fn(3, tag, |_, _| Scalar::from_int(rng.gen_range(0..3), &tag));
        let gens: Vec<Matrix<Scalar>> = (0..h)
            .map(|_| Matrix::from_fn(3, tag, |_, _| Scalar::from_int(rng.gen_range(0..3), &tag)))
            .collect();
        let s = AffineSubspace::new(base, gens).unwrap();
        let cert = nilpotency::certify_nilpotent(&s).unwrap();
        let verdict = oracle::oracle_all_property(
            &s,
            OracleProperty::Nilpotent,
            OracleDomain::Enumerate,
            100_000,
        )
        .unwrap();
        let agreement = oracle::cross_validate(
            cert.verdict == NilpotencyVerdict::AllNilpotent,
            cert.method,
            s.field(),
            &verdict,
        );
        assert!(agreement.agree);
        agreements += 1;
    }
    assert_eq!(agreements, 100);
    pass(10, "certifier and enumeration oracle agree on 100/100 random GF(3) spaces");
}

#[test]
fn acceptance_11_kernel_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    for _ in 0..100 {
        let m = random_int_matrix(&mut rng, 5, 6);
        assert_eq!(berkowitz(&m), faddeev_leverrier(&m).unwrap());
    }
    pass(11, "Berkowitz = Faddeev-LeVerrier on 100 random 5x5 rational matrices");
}
