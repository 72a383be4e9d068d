use num_complex::Complex64 as C64;
use proptest::prelude::*;

use qcapax_core::capacity::{ce_gadc, ce_objective, holevo_gadc, holevo_unital, trajectory};
use qcapax_core::channel::{apply, is_cp, is_cp_linear, stationary_state};
use qcapax_core::choi::{choi, kraus};
use qcapax_core::dynamics::kernel::laplace_of_samples;
use qcapax_core::dynamics::recipes::h_decay;
use qcapax_core::dynamics::{
    convolution_identity_check, example1_kernel, k_from_kernel, kernel_from_k, volterra_solve,
    GadcFamily, GeneratorSpec, KernelComponent, KernelRates, KernelTerm, Profile,
};
use qcapax_core::entropy::entropy;
use qcapax_core::linalg::hermitian_eig;
use qcapax_core::{gadc, make_channel, BlochVector, CMat, KrausSet};

fn unit() -> impl Strategy<Value = f64> {
    -1.0f64..=1.0
}

fn valid_channel() -> impl Strategy<Value = (f64, f64, f64)> {
    (unit(), unit(), unit()).prop_filter("completely positive", |&(a, b, c)| {
        make_channel(a, b, c)
            .map(|ch| ch.is_valid())
            .unwrap_or(false)
    })
}

fn bloch() -> impl Strategy<Value = BlochVector> {
    (
        0.0f64..=1.0,
        0.0f64..=std::f64::consts::PI,
        0.0f64..std::f64::consts::TAU,
    )
        .prop_map(|(r, theta, phi)| {
            let v = BlochVector::from_angles(theta, phi);
            BlochVector::new(r * v.x, r * v.y, r * v.z).unwrap()
        })
}

/// Unitary from Gram–Schmidt on the columns of a complex matrix.
fn unitary(n: usize, entries: &[(f64, f64)]) -> CMat {
    let mut cols: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| C64::new(entries[i * n + j].0, entries[i * n + j].1))
                .collect()
        })
        .collect();
    for j in 0..n {
        for k in 0..j {
            let overlap: C64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            let prev = cols[k].clone();
            for (c, p) in cols[j].iter_mut().zip(prev) {
                *c -= overlap * p;
            }
        }
        let norm = cols[j].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|c| *c /= norm);
    }
    CMat::from_fn(n, |i, j| cols[j][i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn choi_positivity_matches_cp_conditions(l1 in unit(), l3 in unit(), ls in unit()) {
        let ch = make_channel(l1, l3, ls).unwrap();
        let (cp, margins) = is_cp(&ch);
        let clear = margins.translation.abs() > 1e-9 && margins.ellipsoid.abs() > 1e-9;
        if clear {
            prop_assert_eq!(choi(&ch).is_psd(), cp);
        }
        if is_cp_linear(&ch) {
            prop_assert!(cp);
        }
    }

    #[test]
    fn channel_output_is_a_state((l1, l3, ls) in valid_channel(), v in bloch()) {
        let ch = make_channel(l1, l3, ls).unwrap();
        let out = apply(&ch, &v.to_density()).unwrap();
        let m = out.matrix();
        prop_assert!((m.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(m.hermiticity_defect() == 0.0);
        prop_assert!(hermitian_eig(m).unwrap().values[0] > -1e-10);
    }

    #[test]
    fn stationary_state_is_fixed((l1, l3, ls) in valid_channel()) {
        let ch = make_channel(l1, l3, ls).unwrap();
        if let Ok(rho) = stationary_state(&ch) {
            let out = apply(&ch, &rho).unwrap();
            prop_assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        }
    }

    #[test]
    fn environment_entropy_ignores_kraus_remixing(
        (l1, l3, ls) in valid_channel(),
        v in bloch(),
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
    ) {
        let ch = make_channel(l1, l3, ls).unwrap();
        let ks = kraus(&ch).unwrap();
        let n = ks.len();
        let u = unitary(n, &entries);
        let remixed = KrausSet {
            operators: (0..n)
                .map(|i| {
                    ks.operators.iter().enumerate().fold(CMat::zeros(2), |acc, (j, k)| {
                        &acc + &k.scale(u[(i, j)])
                    })
                })
                .collect(),
        };
        prop_assert!(remixed.completeness_residual() < 1e-10);
        let rho = v.to_density();
        let a = entropy(&ks.complementary(rho.matrix())).unwrap();
        let b = entropy(&remixed.complementary(rho.matrix())).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn eigensolver_reconstructs(entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16)) {
        let raw = CMat::from_fn(4, |i, j| C64::new(entries[4 * i + j].0, entries[4 * i + j].1));
        let h = (&raw + &raw.adjoint()).scale_real(0.5);
        let eig = hermitian_eig(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) < 1e-9);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let gram = &eig.vectors.adjoint() * &eig.vectors;
        prop_assert!(gram.max_abs_diff(&CMat::identity(4)) < 1e-9);
    }

    #[test]
    fn assisted_weights_normalized(lambda in 0.0f64..=1.0, p in unit(), z in unit()) {
        prop_assert!((ce_objective(lambda, p, z).weight_sum() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn capacities_symmetric_in_p(lambda in 0.0f64..0.999, p in 0.0f64..0.999) {
        let (a, b) = (holevo_gadc(lambda, p).unwrap(), holevo_gadc(lambda, -p).unwrap());
        prop_assert!((a.chi - b.chi).abs() < 1e-8);
        prop_assert!(a.residual < 1e-10);
        let (c, d) = (ce_gadc(lambda, p).unwrap().0, ce_gadc(lambda, -p).unwrap().0);
        prop_assert!((c - d).abs() < 1e-8);
    }

    #[test]
    fn holevo_reduces_to_unital(lambda in 0.0f64..=1.0) {
        let h = holevo_gadc(lambda, 0.0).unwrap();
        prop_assert!((h.chi - holevo_unital(lambda).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn decay_profile_monotone_in_rate(a in 0.0f64..5.0, b in 0.0f64..5.0, t in 0.0f64..20.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(h_decay(hi, t) <= h_decay(lo, t) + 1e-15);
    }

    #[test]
    fn kernel_rate_round_trip(
        w in prop::collection::vec(-2.0f64..2.0, 3),
        c in prop::collection::vec(-2.0f64..2.0, 3),
        r in prop::collection::vec(0.0f64..3.0, 3),
        t in 0.0f64..5.0,
    ) {
        let comp = |i: usize| KernelComponent::from_terms(w[i], vec![KernelTerm::Exp { coeff: c[i], rate: r[i] }]);
        let k = KernelRates { k_plus: comp(0), k_minus: comp(1), k3: comp(2) };
        let back = k_from_kernel(&kernel_from_k(&k).unwrap()).unwrap();
        for (x, y) in [(&k.k_plus, &back.k_plus), (&k.k_minus, &back.k_minus), (&k.k3, &back.k3)] {
            prop_assert!((x.delta_weight - y.delta_weight).abs() < 1e-12);
            prop_assert!((x.eval(t) - y.eval(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn generator_maps_compose(
        gp in 0.0f64..2.0, gm in 0.0f64..2.0, g3 in 0.0f64..2.0,
        t in 0.0f64..3.0, s in 0.0f64..3.0,
    ) {
        let g = GeneratorSpec::constant(gp, gm, g3);
        let [a1, a3, a_s] = g.transition(0.0, t).unwrap();
        let [b1, b3, b_s] = g.transition(t, t + s).unwrap();
        let [c1, c3, c_s] = g.transition(0.0, t + s).unwrap();
        prop_assert!((a1 * b1 - c1).abs() < 1e-10);
        prop_assert!((a3 * b3 - c3).abs() < 1e-10);
        prop_assert!((b3 * a_s + b_s - c_s).abs() < 1e-10);
    }

    #[test]
    fn trajectory_rows_ordered(p in unit(), cosine in any::<bool>()) {
        let profile = if cosine { Profile::Cosine } else { Profile::ExpDecay };
        let fam = GadcFamily::new(profile, p).unwrap();
        for r in trajectory(&fam, 6.0, 13).unwrap() {
            prop_assert!(r.chi_unital <= r.chi + 1e-9);
            prop_assert!(r.chi <= r.c_e + 1e-9);
            prop_assert!(r.c_e_unital <= r.c_e + 1e-9);
        }
    }
}

fn example1_params() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0).prop_map(|(eta, d1, d3, ds)| {
        let xi1 = eta + d1;
        let xi3 = xi1 + d3;
        (eta, xi1, xi3, xi3 + ds)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn admissible_recipe_yields_linear_cp_maps((eta, x1, x3, xs) in example1_params()) {
        let recipe = example1_kernel(eta, x1, x3, xs, 10.0).unwrap();
        prop_assert!(recipe.admissible());
        let traj = volterra_solve(&recipe.kernel, 10.0, 1e-2).unwrap();
        for i in 0..traj.len() {
            let [l1, l3, ls] = traj.at(i);
            prop_assert!(is_cp_linear(&make_channel(l1, l3, ls).unwrap()), "t = {}", traj.times[i]);
        }
        prop_assert!(convolution_identity_check(&recipe.kernel, &traj) < 1e-3);
    }

    #[test]
    fn solved_trajectory_matches_laplace_form((eta, x1, x3, xs) in example1_params()) {
        let recipe = example1_kernel(eta, x1, x3, xs, 40.0).unwrap();
        let dt = 1e-3;
        let traj = volterra_solve(&recipe.kernel, 40.0, dt).unwrap();
        for s in [0.5, 1.0, 2.0] {
            let want = recipe.kernel.laplace_eigenvalues(s);
            let got = [
                laplace_of_samples(&traj.lambda1, dt, s),
                laplace_of_samples(&traj.lambda3, dt, s),
                laplace_of_samples(&traj.lambda_star, dt, s),
            ];
            for (g, w) in got.iter().zip(want) {
                prop_assert!((g - w).abs() < 1e-3, "s = {}: {} vs {}", s, g, w);
            }
        }
    }

    #[test]
    fn mixed_semigroups_stay_semigroups(
        a in prop::collection::vec(0.0f64..1.5, 3),
        b in prop::collection::vec(0.0f64..1.5, 3),
        w in 0.0f64..=1.0,
    ) {
        let markov = |r: &[f64]| KernelRates {
            k_plus: KernelComponent::delta(r[0]),
            k_minus: KernelComponent::delta(r[1]),
            k3: KernelComponent::delta(r[2]),
        };
        let (ka, kb) = (markov(&a), markov(&b));
        let mixed = KernelRates::mix(&[(w, &ka), (1.0 - w, &kb)]).unwrap();
        let dt = 1e-3;
        let traj = volterra_solve(&kernel_from_k(&mixed).unwrap(), 4.0, dt).unwrap();
        for (i, j) in [(500, 1500), (1000, 1000), (250, 3000), (2000, 2000)] {
            let (x, y, z) = (traj.at(i), traj.at(j), traj.at(i + j));
            prop_assert!((x[0] * y[0] - z[0]).abs() < 1e-6);
            prop_assert!((x[1] * y[1] - z[1]).abs() < 1e-6);
            prop_assert!((y[1] * x[2] + y[2] - z[2]).abs() < 1e-6);
        }
    }
}

#[test]
fn gadc_kraus_count() {
    let ks = kraus(&gadc(0.6, 0.5).unwrap()).unwrap();
    assert_eq!(ks.len(), 4);
    assert!(ks.completeness_residual() < 1e-10);
}
