use num_bigint::BigInt;
use proptest::prelude::*;
use rbnsize_core::rbn::{
    decode_rbn, encode_framed, encode_rbn, fold_pairs, replace_runs, value_of_bits, value_of_rbn, weight,
    BitString, RbnDigit, RbnString,
};

/// Reference recoder on plain integers, lsb-first: every run of `k > 1`
/// ones becomes `-1 .. +1`, then opposite pairs are folded until none remain.
fn reference_encode(bits: &[bool]) -> Vec<i8> {
    let n = bits.len();
    let mut d = vec![0i8; n + 1];
    let mut i = 0;
    while i < n {
        if !bits[i] {
            i += 1;
            continue;
        }
        let j = (i..n).find(|&j| !bits[j]).unwrap_or(n);
        if j - i == 1 {
            d[i] = 1;
        } else {
            d[i] = -1;
            d[j] = 1;
        }
        i = j;
    }
    while let Some(p) = (0..n).find(|&p| d[p] == 1 && d[p + 1] == -1) {
        d[p] = -1;
        d[p + 1] = 0;
    }
    d
}

fn bits_of(value: u64, n: usize) -> BitString {
    BitString::from_u64(value, n)
}

fn bits_strategy(max: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 0..max)
}

#[test]
fn matches_reference_recoder_exhaustively() {
    for n in 0..=12 {
        for v in 0..1u64 << n {
            let x = bits_of(v, n);
            let got: Vec<i8> = encode_rbn(&x).iter().map(|d| d.value()).collect();
            assert_eq!(got, reference_encode(x.as_slice()), "{x}");
        }
    }
}

#[test]
fn run_heavy_inputs_fold() {
    // the lower run's +1 sits directly under the upper run's -1
    let x = BitString::parse_msb("11011").unwrap();
    assert_eq!(replace_runs(&x).to_ascii_string(), "10T10T");
    assert_eq!(encode_rbn(&x).to_ascii_string(), "100T0T");

    let x = BitString::parse_msb("1011").unwrap();
    assert_eq!(encode_rbn(&x).to_ascii_string(), "0110T");
}

#[test]
fn fold_is_idempotent_on_encoder_pipelines_exhaustively() {
    for n in 0..=12 {
        for v in 0..1u64 << n {
            let once = fold_pairs(&replace_runs(&bits_of(v, n)));
            assert_eq!(fold_pairs(&once).digits(), once.digits());
        }
    }
}

#[test]
fn strict_weight_savings_on_long_runs() {
    for k in 3..=40 {
        let x = BitString::ones(k);
        assert_eq!(weight(&encode_rbn(&x)), 2);
        assert!(weight(&encode_rbn(&x)) < x.popcount());
    }
}

#[test]
fn all_ones_frame_has_two_nonzero_digits() {
    let enc = encode_rbn(&BitString::ones(1024));
    assert_eq!(enc.len(), 1025);
    assert_eq!(weight(&enc), 2);
    assert_eq!(enc.get(0), Some(RbnDigit::Neg));
    assert_eq!(enc.get(1024), Some(RbnDigit::Pos));
}

#[test]
fn framed_encoding_keeps_the_partial_tail() {
    let x = BitString::ones(20);
    let frames = encode_framed(&x, 8);
    assert_eq!(frames.iter().map(RbnString::len).collect::<Vec<_>>(), [9, 9, 5]);
}

proptest! {
    #[test]
    fn round_trip(bits in bits_strategy(300)) {
        let x = BitString::from_bits(bits);
        prop_assert_eq!(decode_rbn(&encode_rbn(&x)).unwrap(), x);
    }

    #[test]
    fn value_is_preserved(bits in bits_strategy(300)) {
        let x = BitString::from_bits(bits);
        prop_assert_eq!(value_of_rbn(&encode_rbn(&x)), BigInt::from(value_of_bits(&x)));
    }

    #[test]
    fn output_is_canonical(bits in bits_strategy(300)) {
        let enc = encode_rbn(&BitString::from_bits(bits));
        prop_assert!(enc.has_canonical_form());
        prop_assert!(enc.is_canonical());
        let adjacent_opposites = enc
            .digits()
            .windows(2)
            .any(|w| w[0].value() * w[1].value() == -1);
        prop_assert!(!adjacent_opposites);
    }

    #[test]
    fn weight_never_exceeds_popcount(bits in bits_strategy(300)) {
        let x = BitString::from_bits(bits);
        let w = weight(&encode_rbn(&x));
        prop_assert!(w <= x.popcount());
        let longest = x
            .as_slice()
            .split(|b| !b)
            .map(<[bool]>::len)
            .max()
            .unwrap_or(0);
        if longest >= 3 {
            prop_assert!(w < x.popcount());
        }
    }

    #[test]
    fn frames_encode_independently(bits in bits_strategy(200), frame in 1usize..40) {
        let x = BitString::from_bits(bits);
        let framed = encode_framed(&x, frame);
        prop_assert_eq!(framed.len(), x.len().div_ceil(frame));
        for (i, enc) in framed.iter().enumerate() {
            let end = (i * frame + frame).min(x.len());
            let part = x.slice(i * frame, end);
            let fresh = encode_rbn(&part);
            prop_assert_eq!(enc.digits(), fresh.digits());
            prop_assert_eq!(decode_rbn(enc).unwrap(), part);
        }
    }

    #[test]
    fn text_forms_round_trip(bits in bits_strategy(64)) {
        let enc = encode_rbn(&BitString::from_bits(bits));
        let unicode: RbnString = enc.to_string().parse().unwrap();
        let ascii: RbnString = enc.to_ascii_string().parse().unwrap();
        prop_assert_eq!(unicode.digits(), enc.digits());
        prop_assert_eq!(ascii.digits(), enc.digits());
    }

    #[test]
    fn decoder_rejects_or_preserves_value(digits in prop::collection::vec(-1i8..=1, 1..40)) {
        let s = RbnString::from_digits(digits.iter().map(|&d| RbnDigit::from_i8(d).unwrap()));
        if let Ok(bits) = decode_rbn(&s) {
            prop_assert_eq!(BigInt::from(value_of_bits(&bits)), value_of_rbn(&s));
        }
    }
}
