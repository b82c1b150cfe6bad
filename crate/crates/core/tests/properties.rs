use proptest::prelude::*;
use qginv::channels::{
    self, adjoint_channel, choi, choi_to_kraus, is_cp, is_tp, is_unital, kraus_to_channel,
    random_cptp, random_ucptp, superop_of_kraus, tp_residual, unital_residual, Channel,
};
use qginv::ginv::{drazin_inverse, mp_inverse, verify_axioms, InverseKind};
use qginv::linalg::{eigh, fro_dist, rank, svd};
use qginv::random::{self, rng};
use qginv::theorems::{self, check_intertwiner_propagation, IntertwinerVariant, Verdict};
use qginv::{CMatrix, Tolerances, C64};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    fro_dist(a, b).unwrap()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

/// Square matrix of rank `r`: a product of Ginibre factors through an r-dimensional space.
fn low_rank(seed: u64, n: usize, r: usize) -> CMatrix {
    let mut g = rng(seed);
    random::ginibre(&mut g, n, r).dot(&random::ginibre(&mut g, r, n))
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn dagger_is_exact_involution_and_antihomomorphism(seed: u64, m in 1usize..7, k in 1usize..7, n in 1usize..7) {
        let mut g = rng(seed);
        let a = random::ginibre(&mut g, m, k);
        let b = random::ginibre(&mut g, k, n);
        prop_assert_eq!(a.dagger().dagger(), a.clone());
        prop_assert_eq!(a.dot(&b).dagger(), b.dagger().dot(&a.dagger()));
    }

    #[test]
    fn rank_is_unitarily_invariant(seed: u64, n in 1usize..=16, r_frac in 0.0f64..=1.0) {
        let r = ((n as f64) * r_frac).round() as usize;
        let a = if r == 0 { CMatrix::zeros(n, n) } else { low_rank(seed, n, r) };
        let mut g = rng(seed ^ 1);
        let u = random::haar_unitary(&mut g, n);
        let v = random::haar_unitary(&mut g, n);
        let t = tol();
        prop_assert_eq!(rank(&a, &t).unwrap(), r);
        prop_assert_eq!(rank(&u.dot(&a).dot(&v), &t).unwrap(), r);
    }

    #[test]
    fn eigh_recovers_spectrum(seed: u64, lambda in prop::collection::vec(-5.0f64..5.0, 1..9)) {
        let n = lambda.len();
        let u = random::haar_unitary(&mut rng(seed), n);
        let h = u.dot(&CMatrix::diag_real(&lambda)).dot(&u.dagger());
        // Force exact Hermiticity; the product above carries roundoff asymmetry.
        let h = (&h + &h.dagger()).scale_real(0.5);
        let e = eigh(&h, &tol()).unwrap();
        let mut sorted = lambda.clone();
        sorted.sort_by(f64::total_cmp);
        for (x, y) in e.values.iter().zip(&sorted) {
            prop_assert!((x - y).abs() < 1e-8, "{:?} vs {:?}", e.values, sorted);
        }
    }

    #[test]
    fn mp_inverse_is_an_involution(seed: u64, m in 1usize..7, n in 1usize..7, r in 0usize..7) {
        let r = r.min(m).min(n);
        let mut g = rng(seed);
        let a = random::ginibre(&mut g, m, r).dot(&random::ginibre(&mut g, r, n));
        let t = tol();
        let inv = mp_inverse(&a, &t).unwrap();
        prop_assert!(inv.max_residual() <= 1e-8);
        let back = mp_inverse(&inv.inverse, &t).unwrap();
        prop_assert!(dist(&back.inverse, &a) <= 1e-8);
    }

    #[test]
    fn double_drazin_law(seed: u64, n in 1usize..=8, nil in 0usize..4) {
        // Invertible part ⊕ nilpotent Jordan block, conjugated by a random unitary.
        let nil = nil.min(n);
        let inv_part = n - nil;
        let mut g = rng(seed);
        let lambda: Vec<C64> = random::dirichlet_uniform(&mut g, inv_part.max(1) + 1)
            .iter()
            .enumerate()
            .take(inv_part)
            .map(|(j, p)| C64::from_polar(0.5 + p, 2.0 * j as f64 + 0.3))
            .collect();
        let a = CMatrix::from_fn(n, n, |i, j| {
            if i < inv_part && i == j {
                lambda[i]
            } else if i >= inv_part && j == i + 1 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let u = random::haar_unitary(&mut g, n);
        let a = u.dot(&a).dot(&u.dagger());
        let t = tol();
        let d = drazin_inverse(&a, &t).unwrap();
        prop_assert_eq!(d.index, if nil == 0 { 0 } else { nil });
        let dd = drazin_inverse(&d.inverse, &t).unwrap();
        prop_assert!(dist(&dd.inverse, &a.dot(&d.inverse).dot(&a)) <= 1e-8);
    }

    #[test]
    fn drazin_is_absolute_under_unitary_conjugation(seed: u64, n in 1usize..=8, r in 0usize..=8) {
        let r = r.min(n);
        let a = if r == 0 { CMatrix::zeros(n, n) } else { low_rank(seed, n, r).scale_real(0.5) };
        let u = random::haar_unitary(&mut rng(seed ^ 7), n);
        let t = tol();
        let Ok(d) = drazin_inverse(&a, &t) else {
            // Rank-r products can be badly conditioned; only certified inverses are compared.
            return Ok(());
        };
        let Ok(conj) = drazin_inverse(&u.dot(&a).dot(&u.dagger()), &t) else { return Ok(()) };
        prop_assert!(dist(&conj.inverse, &u.dot(&d.inverse).dot(&u.dagger())) <= 1e-7);
    }

    #[test]
    fn drazin_uniqueness_under_perturbation(seed: u64, n in 1usize..=8, scale in 1e-5f64..1e-2) {
        // Perturbing the certified inverse must break at least one axiom.
        let mask: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { 1.0 }).collect();
        let a = random::conditioned(&mut rng(seed), n, 0.5, 1.5).dot(&CMatrix::diag_real(&mask));
        let t = tol();
        let d = drazin_inverse(&a, &t).unwrap();
        let e = random::ginibre(&mut rng(seed ^ 3), n, n);
        let e = e.scale_real(scale / e.fro_norm().max(1e-300));
        let perturbed = &d.inverse + &e;
        let check = verify_axioms(InverseKind::Drazin, &a, &perturbed, &t).unwrap();
        prop_assert!(check.max_residual() > 1e-10, "{:?}", check);
    }

    #[test]
    fn intertwiner_outputs_commute(seed: u64, i in 0usize..64) {
        let (f, g, k) = theorems::intertwiner_instance(seed, i);
        let t = tol();
        for variant in [IntertwinerVariant::Drazin, IntertwinerVariant::DaggerDrazin] {
            let r = check_intertwiner_propagation(&f, &g, &k, None, variant, &t).unwrap();
            prop_assert_eq!(r.verdict, Verdict::Verified);
            prop_assert!(r.max_residual <= 1e-7);
        }
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn svd_reconstructs_up_to_64(seed: u64, m in 1usize..=64, n in 1usize..=64) {
        let a = random::ginibre(&mut rng(seed), m, n);
        let f = svd(&a).unwrap();
        prop_assert!(dist(&f.reconstruct(), &a) <= 1e-8);
        let r = f.singular_values.len();
        prop_assert!(dist(&f.u.dagger().dot(&f.u), &CMatrix::identity(f.u.cols())) <= 1e-8);
        prop_assert!(dist(&f.v.dagger().dot(&f.v), &CMatrix::identity(f.v.cols())) <= 1e-8);
        prop_assert!(f.singular_values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(r <= m.min(n));
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn kraus_super_choi_round_trip(seed: u64, d in 1usize..=4, env in 1usize..=3) {
        let ch = random_cptp(d, d, env.max(1), seed).unwrap();
        let ks = choi_to_kraus(&choi(&ch), &tol()).unwrap();
        prop_assert!(dist(&superop_of_kraus(&ks), ch.superop()) <= 1e-8);
        let back = kraus_to_channel(ks).unwrap();
        prop_assert!(is_tp(&back, &tol()).verdict);
    }

    #[test]
    fn tp_and_unital_match_kraus_sums(seed: u64, d_in in 1usize..=3, d_out in 1usize..=3, env in 1usize..=3) {
        prop_assume!(env * d_out >= d_in);
        let ch = random_cptp(d_in, d_out, env, seed).unwrap();
        let ks = ch.kraus().unwrap();
        let sum_dk = ks.iter().fold(CMatrix::zeros(d_in, d_in), |acc, k| &acc + &k.dagger().dot(k));
        let sum_kd = ks.iter().fold(CMatrix::zeros(d_out, d_out), |acc, k| &acc + &k.dot(&k.dagger()));
        let s = ch.superop();
        prop_assert!((tp_residual(s, d_in, d_out) - dist(&sum_dk, &CMatrix::identity(d_in))).abs() <= 1e-10);
        prop_assert!((unital_residual(s, d_in, d_out) - dist(&sum_kd, &CMatrix::identity(d_out))).abs() <= 1e-10);
    }

    #[test]
    fn composition_closure(seed: u64, d in 2usize..=3) {
        let t = tol();
        let a = random_cptp(d, d, 2, seed).unwrap();
        let b = random_cptp(d, d, 3, seed ^ 5).unwrap();
        let ab = a.then(&b).unwrap();
        prop_assert!(is_tp(&ab, &t).verdict);
        prop_assert!(is_cp(&ab.clone().without_kraus(), &t).unwrap().verdict);
        let u = random_ucptp(d, 3, seed).unwrap().then(&random_ucptp(d, 2, seed ^ 9).unwrap()).unwrap();
        prop_assert!(is_unital(&u, &t).verdict && is_tp(&u, &t).verdict);
    }
}

#[test]
fn adjoint_duality_over_200_channels() {
    let t = tol();
    for i in 0..200u64 {
        let d_in = 1 + (i % 3) as usize;
        let d_out = 1 + ((i / 3) % 3) as usize;
        let ch: Channel = match i % 4 {
            0 => random_ucptp(d_in, 2, i).unwrap(),
            1 => {
                let v = random::isometry(&mut rng(i), d_out.max(d_in), d_in);
                channels::conjugation_channel(&v)
            }
            _ => random_cptp(d_in, d_out, 3, i).unwrap(),
        };
        let adj = adjoint_channel(&ch);
        assert_eq!(is_tp(&ch, &t).verdict, is_unital(&adj, &t).verdict, "instance {i}");
        assert_eq!(is_unital(&ch, &t).verdict, is_tp(&adj, &t).verdict, "instance {i}");
    }
}
