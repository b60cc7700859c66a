use proptest::prelude::*;

use clusterjs::cluster::{
    assign_clusters, compute_attractors, fit_with_partition, partition_for, refine_partition,
    Partition,
};
use clusterjs::estimators::{
    constant_basis, estimate_js, estimate_js_positive, estimate_lindley, estimate_subspace_js,
    shrink_toward, EstimatorOutput,
};
use clusterjs::hybrid::{loss_estimate_cluster, loss_estimate_lindley, select_hybrid};
use clusterjs::numeric::squared_norm;
use clusterjs::theory::{
    asymptotic_loss, separator_limits, theory_l_cluster, theory_two_cluster, LossKind, ThetaVector,
};
use clusterjs::{estimate_cluster_js, ObservationVector};

fn vector(min_len: usize, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-20.0..20.0f64, min_len..=max_len)
}

fn sigma() -> impl Strategy<Value = f64> {
    0.1..3.0f64
}

fn reconstructs(y: &[f64], out: &EstimatorOutput) -> bool {
    y.iter()
        .zip(&out.attracting_vector)
        .zip(&out.estimate)
        .all(|((yi, ni), ei)| {
            let rebuilt = ni + out.shrinkage_factor * (yi - ni);
            (rebuilt - ei).abs() <= 1e-12 * ei.abs().max(1.0)
        })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn shrinkage_identity_holds(v in vector(5, 40), s in sigma(), delta in 0.05..2.0f64) {
        let y = ObservationVector::new(v.clone(), s).unwrap();
        let mut outputs = vec![
            estimate_js(&y).unwrap(),
            estimate_js_positive(&y),
            estimate_lindley(&y, false).unwrap(),
            estimate_lindley(&y, true).unwrap(),
        ];
        for l in [2, 4] {
            outputs.push(estimate_cluster_js(&y, l, delta).unwrap());
        }
        for out in &outputs {
            prop_assert!(reconstructs(&v, out));
        }
    }

    #[test]
    fn positive_part_is_closer_to_origin(v in vector(3, 30), s in sigma()) {
        let y = ObservationVector::new(v, s).unwrap();
        let plain = squared_norm(&estimate_js(&y).unwrap().estimate);
        let plus = squared_norm(&estimate_js_positive(&y).estimate);
        prop_assert!(plus <= plain * (1.0 + 1e-12));
    }

    #[test]
    fn attractor_is_a_fixed_point(c in -10.0..10.0f64, n in 4usize..30, s in sigma()) {
        let y = ObservationVector::new(vec![c; n], s).unwrap();
        // the projection onto the constant vector rounds in the last bit
        for positive_part in [true, false] {
            let out = estimate_lindley(&y, positive_part).unwrap();
            prop_assert!(out.estimate.iter().all(|e| (e - c).abs() <= 1e-14 * c.abs().max(1.0)));
        }
        let zero = ObservationVector::new(vec![0.0; n], s).unwrap();
        prop_assert_eq!(estimate_js(&zero).unwrap().estimate, vec![0.0; n]);
        prop_assert_eq!(estimate_js_positive(&zero).estimate, vec![0.0; n]);
    }

    #[test]
    fn shrink_toward_self_is_identity(v in vector(1, 30), s in sigma()) {
        let y = ObservationVector::new(v.clone(), s).unwrap();
        prop_assert_eq!(shrink_toward(&y, v.clone()).unwrap().estimate, v);
    }

    #[test]
    fn constant_subspace_equals_lindley(v in vector(4, 40), s in sigma()) {
        let y = ObservationVector::new(v, s).unwrap();
        let sub = estimate_subspace_js(&y, &constant_basis(y.len())).unwrap();
        prop_assert_eq!(sub, estimate_lindley(&y, false).unwrap());
    }

    #[test]
    fn indicator_columns_partition_the_index_set(v in vector(2, 60), log_l in 1u32..4) {
        let y = ObservationVector::new(v, 1.0).unwrap();
        let p = partition_for(&y, 1 << log_l).unwrap();
        let a = assign_clusters(&y, &p);
        prop_assert_eq!(a.counts.iter().sum::<usize>(), y.len());
        for (i, &k) in a.labels.iter().enumerate() {
            // exactly one indicator is set per row, so columns are orthogonal and sum to 1
            let bounds_ok = (k == 0 || y.values()[i] <= p.separators()[k - 1])
                && (k == p.separators().len() || y.values()[i] > p.separators()[k]);
            prop_assert!(bounds_ok);
        }
    }

    #[test]
    fn refinement_is_strictly_descending(v in vector(1, 60), rounds in 1usize..4) {
        let y = ObservationVector::new(v, 1.0).unwrap();
        let mut p = Partition::trivial();
        for _ in 0..rounds {
            p = refine_partition(&y, &p);
            prop_assert!(p.separators().windows(2).all(|w| w[0] > w[1]));
            prop_assert_eq!(assign_clusters(&y, &p).counts.iter().sum::<usize>(), y.len());
        }
    }

    #[test]
    fn attractors_are_corrected_cluster_means(v in vector(3, 40), s in sigma(), delta in 0.01..3.0f64, log_l in 1u32..3) {
        let y = ObservationVector::new(v.clone(), s).unwrap();
        let p = partition_for(&y, 1 << log_l).unwrap();
        let a = assign_clusters(&y, &p);
        let set = compute_attractors(&y, &p, &a, delta).unwrap();
        for k in 0..p.num_clusters() {
            if a.counts[k] == 0 {
                prop_assert!(set.empty_clusters.contains(&k));
                prop_assert_eq!(set.attractors[k], 0.0);
                continue;
            }
            let members: Vec<f64> = v.iter().zip(&a.labels).filter(|(_, &l)| l == k).map(|(x, _)| *x).collect();
            let mean = members.iter().sum::<f64>() / members.len() as f64;
            let shift = s * s / (2.0 * delta) * set.boundary_imbalance(k) / a.counts[k] as f64;
            prop_assert!((set.attractors[k] - (mean - shift)).abs() <= 1e-9 * (1.0 + mean.abs() + shift.abs()));
            if set.boundary_counts.iter().all(|&b| b == 0) {
                prop_assert!((set.attractors[k] - mean).abs() <= 1e-12 * (1.0 + mean.abs()));
            }
        }
    }

    #[test]
    fn one_cluster_is_lindley_plus(v in vector(4, 30), s in sigma(), delta in 0.1..2.0f64) {
        let y = ObservationVector::new(v, s).unwrap();
        prop_assert_eq!(estimate_cluster_js(&y, 1, delta).unwrap(), estimate_lindley(&y, true).unwrap());
    }

    #[test]
    fn two_cluster_constants_are_ordered(v in vector(3, 12), s in sigma()) {
        let theta = ThetaVector::new(v).unwrap();
        let c = theory_two_cluster(&theta, s).unwrap();
        prop_assert!(c.c[0] >= c.c[1]);
        prop_assert!(c.beta >= c.alpha);
        prop_assert!(c.beta >= 0.0 && c.alpha.is_finite());
        let loss = asymptotic_loss(LossKind::Cluster, &c, s);
        prop_assert!(loss <= c.beta * (1.0 + 1e-12));
        let var = s * s;
        if c.alpha + var > 0.0 {
            prop_assert!(loss <= var * c.beta / (c.alpha + var) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn l2_general_form_matches_two_cluster(v in vector(3, 12), s in sigma()) {
        let theta = ThetaVector::new(v).unwrap();
        let a = theory_two_cluster(&theta, s).unwrap();
        let b = theory_l_cluster(&theta, s, &[theta.mean()]).unwrap();
        let scale = 1.0 + theta.gamma();
        prop_assert!((a.beta - b.beta).abs() <= 1e-12 * scale);
        prop_assert!((a.alpha - b.alpha).abs() <= 1e-12 * scale);
        for (x, y) in a.c.iter().zip(&b.c) {
            prop_assert!((x - y).abs() <= 1e-12 * scale.sqrt());
        }
    }

    #[test]
    fn constants_scale_quadratically(v in vector(3, 12), s in sigma(), t in 0.25..4.0f64) {
        let theta = ThetaVector::new(v.clone()).unwrap();
        let scaled = ThetaVector::new(v.iter().map(|x| x * t).collect()).unwrap();
        let a = theory_two_cluster(&theta, s).unwrap();
        let b = theory_two_cluster(&scaled, s * t).unwrap();
        let t2 = t * t;
        let tol = 1e-9 * t2 * (1.0 + theta.gamma());
        prop_assert!((b.beta - t2 * a.beta).abs() <= tol);
        prop_assert!((b.alpha - t2 * a.alpha).abs() <= tol);
        prop_assert!((b.gamma - t2 * a.gamma).abs() <= tol);
        prop_assert!((b.rho - t2 * a.rho).abs() <= tol);
    }

    #[test]
    fn four_cluster_constants_are_finite(v in vector(3, 12), s in sigma()) {
        let theta = ThetaVector::new(v).unwrap();
        let mu = separator_limits(&theta, s, 4).unwrap();
        prop_assert!(mu.windows(2).all(|w| w[0] > w[1]));
        let c = theory_l_cluster(&theta, s, &mu).unwrap();
        prop_assert!(c.beta >= 0.0 && c.beta.is_finite() && c.alpha.is_finite());
    }

    #[test]
    fn hybrid_picks_an_argmin(v in vector(4, 50), s in sigma(), delta in 0.05..2.0f64) {
        let y = ObservationVector::new(v, s).unwrap();
        let (sel, out) = select_hybrid(&y, &[1, 2, 4], delta).unwrap();
        let chosen = sel.losses.per_candidate.get(&sel.chosen).copied();
        for (&l, &loss) in &sel.losses.per_candidate {
            prop_assert!(loss.is_finite() && loss >= 0.0);
            if let Some(c) = chosen {
                prop_assert!(c <= loss, "candidate {} beats chosen {}", l, sel.chosen);
            }
        }
        prop_assert_eq!(sel.gamma_weights.values().map(|&w| w as u32).sum::<u32>(), 1);
        let again = select_hybrid(&y, &[1, 2, 4], delta).unwrap();
        prop_assert_eq!(&again.0, &sel);
        prop_assert_eq!(again.1, out);
    }

    #[test]
    fn loss_estimates_are_bounded(v in vector(2, 50), s in sigma(), delta in 0.05..2.0f64) {
        let y = ObservationVector::new(v, s).unwrap();
        let l = loss_estimate_lindley(&y);
        prop_assert!((0.0..s * s).contains(&l));
        if let Some(c) = loss_estimate_cluster(&y, 2, delta).unwrap() {
            prop_assert!(c.is_finite() && c >= 0.0);
        }
    }

    #[test]
    fn explicit_partition_matches_doubling(v in vector(2, 40), delta in 0.05..2.0f64) {
        let y = ObservationVector::new(v, 1.0).unwrap();
        let p = partition_for(&y, 2).unwrap();
        let a = fit_with_partition(&y, p, delta).unwrap();
        prop_assert_eq!(a.output, estimate_cluster_js(&y, 2, delta).unwrap());
    }
}
