use proptest::prelude::*;

use tailbiting::baselines::{decode_cva_fixed, decode_exhaustive, decode_ml, decode_ml_pruned};
use tailbiting::encoder::{encode_tailbiting, rotate, rotate_right, tailbiting_path};
use tailbiting::reliability::StateReliability;
use tailbiting::trellis::{build_trellis, CodeSpec, Trellis};
use tailbiting::tsva::{decode_anchored, decode_tsva, TsvaConfig};
use tailbiting::viterbi::branch_metric;

fn trellis(gens: &str) -> Trellis {
    build_trellis(&CodeSpec::from_octal(gens, None).unwrap())
}

fn codeword_cost(t: &Trellis, llrs: &[f64], info: &[u8]) -> f64 {
    let coded = encode_tailbiting(t, info).unwrap();
    llrs.chunks_exact(t.n_out())
        .zip(coded.chunks_exact(t.n_out()))
        .map(|(l, c)| branch_metric(l, c))
        .sum()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// Noisy LLRs around a random codeword of `t`.
fn block(
    gens: &'static str,
    len: std::ops::Range<usize>,
) -> impl Strategy<Value = (&'static str, Vec<u8>, Vec<f64>)> {
    let n_out = gens.split(',').count();
    len.prop_flat_map(move |l| {
        (
            prop::collection::vec(0u8..2, l),
            prop::collection::vec(-2.5f64..2.5, l * n_out),
        )
    })
    .prop_map(move |(info, noise)| {
        let t = trellis(gens);
        let coded = encode_tailbiting(&t, &info).unwrap();
        let llrs = coded
            .iter()
            .zip(&noise)
            .map(|(&b, z)| if b == 0 { 1.0 + z } else { -1.0 + z })
            .collect();
        (gens, info, llrs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ml_is_never_worse_than_tsva((gens, _info, llrs) in block("171,133", 7..40), window in 1usize..24) {
        let t = trellis(gens);
        let ml = decode_ml_pruned(&t, &llrs).unwrap();
        let tsva = decode_tsva(&t, &llrs, &TsvaConfig::new(window.min(llrs.len() / 2 + 1), 1).unwrap()).unwrap();
        prop_assert!(ml.path_metric <= tsva.path_metric + 1e-9);
        prop_assert!(close(codeword_cost(&t, &llrs, &ml.info_bits), ml.path_metric));
    }

    #[test]
    fn anchoring_on_the_ml_path_gives_the_ml_metric((gens, _info, llrs) in block("15,17", 3..30), at in 0usize..1000) {
        let t = trellis(gens);
        let ml = decode_ml(&t, &llrs).unwrap();
        let len = ml.info_bits.len();
        let position = at % len;
        let state = tailbiting_path(&t, &ml.info_bits).unwrap()[position];
        let forced = decode_anchored(&t, &llrs, position, state).unwrap();
        prop_assert!(close(forced.path_metric, ml.path_metric));
        prop_assert!(forced.is_tailbiting);
    }

    #[test]
    fn ml_commutes_with_rotation((gens, _info, llrs) in block("171,133,165", 6..24), shift in 0usize..64) {
        let t = trellis(gens);
        let len = llrs.len() / 3;
        let j = shift % len;
        let direct = decode_ml_pruned(&t, &llrs).unwrap();
        let rotated = decode_ml_pruned(&t, &rotate(&llrs, 3 * j)).unwrap();
        prop_assert!(close(rotated.path_metric, direct.path_metric));
        let back = rotate_right(&rotated.info_bits, j);
        prop_assert!(close(codeword_cost(&t, &llrs, &back), direct.path_metric));
    }

    #[test]
    fn ml_matches_exhaustive_on_small_blocks((gens, _info, llrs) in block("7,5", 2..12)) {
        let t = trellis(gens);
        let ex = decode_exhaustive(&t, &llrs).unwrap();
        let ml = decode_ml(&t, &llrs).unwrap();
        prop_assert!(close(ml.path_metric, ex.path_metric));
        prop_assert!(ml.info_bits == ex.info_bits || ml.path_metric == ex.path_metric);
    }

    #[test]
    fn pruned_ml_is_exact((gens, _info, llrs) in block("171,133", 6..50)) {
        let t = trellis(gens);
        let full = decode_ml(&t, &llrs).unwrap();
        let pruned = decode_ml_pruned(&t, &llrs).unwrap();
        prop_assert_eq!(pruned.info_bits, full.info_bits);
        prop_assert_eq!(pruned.path_metric, full.path_metric);
    }

    #[test]
    fn power_of_two_scaling_keeps_decisions((gens, _info, llrs) in block("171,133", 6..40), e in -4i32..5) {
        let t = trellis(gens);
        let f = 2f64.powi(e);
        let s: Vec<f64> = llrs.iter().map(|l| l * f).collect();
        let cfg = TsvaConfig::new(12.min(llrs.len() / 2 + 1), 1).unwrap();
        let (a, b) = (decode_tsva(&t, &llrs, &cfg).unwrap(), decode_tsva(&t, &s, &cfg).unwrap());
        prop_assert_eq!(a.info_bits, b.info_bits);
        prop_assert_eq!(a.anchor, b.anchor);
        prop_assert_eq!(decode_ml_pruned(&t, &llrs).unwrap().info_bits, decode_ml_pruned(&t, &s).unwrap().info_bits);
        prop_assert_eq!(decode_cva_fixed(&t, &llrs, 2).unwrap().info_bits, decode_cva_fixed(&t, &s, 2).unwrap().info_bits);
    }

    #[test]
    fn likelihoods_are_nonnegative_and_cover_the_path((gens, _info, llrs) in block("171,133,165", 6..40), copies in 1usize..4) {
        let t = trellis(gens);
        let rel = StateReliability::estimate(&t, &llrs, copies).unwrap();
        prop_assert_eq!(rel.likelihoods.len(), copies * llrs.len() / 3 + 1);
        prop_assert!(rel.likelihoods.iter().all(|l| l.is_finite() && *l >= 0.0));
        prop_assert_eq!(rel.update_count(), copies * llrs.len() / 3);
    }
}
