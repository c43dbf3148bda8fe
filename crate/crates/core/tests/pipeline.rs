use opnorm_core::amplify::{gap_growth_report, OracleBudget};
use opnorm_core::embeddings::derandomized_embedding;
use opnorm_core::io::{
    decode_binary, encode_binary, parse_csv, parse_instance, parse_labeling, parse_matrix_market,
    write_csv, write_instance, write_labeling, write_matrix_market,
};
use opnorm_core::norm::{estimate_norm, EngineBudget, Method};
use opnorm_core::numerics::{gaussian_moment, rademacher_moment_exact};
use opnorm_core::reduction::{
    build_reduction_matrix, generate_planted, soundness_estimate, ReductionConfig,
};
use opnorm_core::{DenseMatrix, Exponent, ExponentPair, Matrix, NormKind};

#[test]
fn planted_instance_survives_text_round_trip() {
    let (inst, labeling) = generate_planted(4, 3, 3, 2, 11, true).unwrap();
    let labeling = labeling.unwrap();
    let back = parse_instance(&write_instance(&inst)).unwrap();
    assert_eq!(back, inst);
    let l = parse_labeling(&write_labeling(&labeling), &back).unwrap();
    assert_eq!(back.satisfied_edges(&l), back.edges().len());

    let a = build_reduction_matrix::<f64>(&inst, &ReductionConfig::default()).unwrap();
    let b = build_reduction_matrix::<f64>(&back, &ReductionConfig::default()).unwrap();
    assert_eq!(a.matrix, b.matrix);
}

#[test]
fn reduction_matrix_through_every_format() {
    let (inst, _) = generate_planted(3, 2, 3, 2, 4, false).unwrap();
    let a = build_reduction_matrix::<f64>(&inst, &ReductionConfig::default())
        .unwrap()
        .matrix;
    assert_eq!(parse_matrix_market(&write_matrix_market(&a)).unwrap(), a);
    assert_eq!(parse_csv(&write_csv(&a)).unwrap(), a);
    assert_eq!(decode_binary(&encode_binary(&a)).unwrap(), a);
}

#[test]
fn satisfiable_soundness_reaches_one() {
    let (inst, _) = generate_planted(4, 3, 4, 2, 2, true).unwrap();
    let out = build_reduction_matrix::<f64>(&inst, &ReductionConfig::default()).unwrap();
    let s = soundness_estimate(&out, 1.0, &Default::default()).unwrap();
    assert!(s.norm_2_to_r >= 1.0 - 1e-6);
    assert!((s.gamma_gap - (s.norm_2_to_r - gaussian_moment(1.0).unwrap())).abs() < 1e-12);
}

#[test]
fn derandomized_embedding_norm_matches_moment() {
    // ||B x||_4^4 = m E<R,x>^4 for every x, so the 2->4 norm is fixed by the moment
    let b: Matrix = derandomized_embedding(6, 4).unwrap();
    let x = [0.5, -1.0, 0.25, 2.0, 0.0, 1.5];
    let lhs: f64 = b.matvec(&x).iter().map(|v| v.powi(4)).sum();
    let rhs = b.rows() as f64 * rademacher_moment_exact(&x, 4).unwrap();
    assert!((lhs - rhs).abs() <= 1e-9 * rhs);
}

#[test]
fn engine_routes_agree_on_small_matrices() {
    let a = DenseMatrix::<f64>::from_rows(&[[1.0, -2.0, 0.5], [0.25, 1.0, 3.0]]).unwrap();
    let budget = EngineBudget::default();
    let inf = Exponent::Infinity;
    let q = Exponent::new(1.5).unwrap();
    let primal = estimate_norm(&a, ExponentPair::new(inf, q), NormKind::Counting, &budget).unwrap();
    let dual = estimate_norm(
        &a.transpose(),
        ExponentPair::new(q.dual(), Exponent::ONE),
        NormKind::Counting,
        &budget,
    )
    .unwrap();
    assert_eq!(primal.method, Method::ExactEnum);
    assert!((primal.value - dual.value).abs() <= 1e-9 * primal.value);
}

#[test]
fn gap_between_norms_compounds_under_powers() {
    let good = DenseMatrix::<f64>::from_rows(&[[1.0, 1.0], [1.0, -1.0]]).unwrap();
    let bad = good.scale(0.9);
    let pq = ExponentPair::from_f64(2.0, 2.0).unwrap();
    let g = gap_growth_report(&good, &bad, pq, 3, &OracleBudget::default()).unwrap();
    assert!(g.monotone);
    assert!((g.log_rate - (1.0f64 / 0.9).ln()).abs() < 1e-9);
}
