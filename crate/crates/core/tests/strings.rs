mod common;

use common::*;
use rephat::field::F101;
use rephat::module::{check_ses, find_isomorphism, is_indecomposable, projective, splitness};
use rephat::strings::{ar_sequence, enumerate_strings, string_module, tau, tau_inverse, StringWord};

#[test]
fn trivial_words_only_at_length_zero() {
    for name in CORPUS {
        let rep = load(name);
        let words = enumerate_strings(&rep, 0, 2, 0);
        assert_eq!(words.len(), 3 * rep.vertex_count(), "{name}");
        assert!(words.iter().all(StringWord::is_trivial));
    }
}

#[test]
fn example_words_appear() {
    let rep = load("example4");
    let words = enumerate_strings(&rep, -1, 2, 4);
    for text in ["t_0^-1 ahat_0", "l_1 b_1 t_1", "l_1 b_1", "ahat_0", "qhat_0 l_1 b_1", "a_0"] {
        let w = word(&rep, text).canonical(&rep);
        assert!(words.contains(&w), "{text} missing");
    }
}

#[test]
fn string_modules_are_indecomposable_and_reversible() {
    for name in CORPUS {
        let rep = load(name);
        for w in enumerate_strings(&rep, 0, 1, 3) {
            let m = string_module::<Q>(&rep, &w);
            assert_eq!(m.total_dim(), w.len() + 1);
            assert!(m.satisfies_relations(), "{}", w.display(&rep));
            assert!(is_indecomposable(&m), "{}", w.display(&rep));
            let inv = string_module::<Q>(&rep, &w.inverse(&rep));
            assert!(find_isomorphism(&m, &inv).is_some_and(|f| f.is_iso()));
        }
    }
}

#[test]
fn display_parse_round_trip() {
    for name in CORPUS {
        let rep = load(name);
        for w in enumerate_strings(&rep, 0, 1, 3) {
            let back = StringWord::parse(&rep, &w.display(&rep)).unwrap();
            assert_eq!(back.canonical(&rep), w);
        }
    }
}

#[test]
fn radical_string_of_a2_projective() {
    let rep = load("a2");
    let p = projective::<Q>(&rep, vx(&rep, "1", 0)).module;
    let rad = p.radical().module;
    let w = word(&rep, "conn_a_0");
    assert!(find_isomorphism(&string_module::<Q>(&rep, &w), &rad).is_some());
    let seq = ar_sequence::<Q>(&rep, &w).unwrap();
    assert_eq!(seq.projective, Some(vx(&rep, "1", 0)));
}

#[test]
fn ar_sequences_are_exact_and_non_split() {
    for name in CORPUS {
        let rep = load(name);
        for w in enumerate_strings(&rep, 0, 1, 3) {
            let label = format!("{name}: {}", w.display(&rep));
            let seq = ar_sequence::<Q>(&rep, &w).unwrap_or_else(|e| panic!("{label}: {e}"));
            assert!(check_ses(&seq.h, &seq.h2).global_exact, "{label}");
            assert!(!splitness(&seq.h).is_split_mono(), "{label}");
            // rad P / soc P may split into two strings next to P
            assert!(seq.middle_words.len() <= 2, "{label}");
            assert!(!seq.middle_words.is_empty() || seq.projective.is_some(), "{label}");
            assert_eq!(tau_inverse(&rep, &w), Some(seq.end.canonical(&rep)), "{label}");
            assert_eq!(tau(&rep, &seq.end), Some(w.clone()), "{label}");
        }
    }
}

#[test]
fn ar_sequences_agree_across_characteristics() {
    let rep = load("a3");
    for w in enumerate_strings(&rep, 0, 1, 2) {
        let q = ar_sequence::<Q>(&rep, &w).unwrap();
        let p = ar_sequence::<F101>(&rep, &w).unwrap();
        assert_eq!(q.middle_words, p.middle_words);
        assert_eq!(q.end, p.end);
    }
}

#[test]
fn example_sequence_through_a_simple() {
    let rep = load("example4");
    let seq = ar_sequence::<Q>(&rep, &word(&rep, "ahat_0")).unwrap();
    assert_eq!(seq.middle_words, vec![word(&rep, "e_2_0")]);
    assert_eq!(seq.projective, Some(vx(&rep, "3", 0)));
    assert_eq!(seq.end.canonical(&rep), word(&rep, "a_0").canonical(&rep));
}
