use cuspfib::sl2z::{
    self, classify, dehn_twist, evaluate_word, is_conjugate, is_conjugate_to_inverse, monodromy_matrix, rl_word,
    HomologyClass, Sl2Class, Sl2Matrix, TwistWord,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn m(a: i64, b: i64, c: i64, d: i64) -> Sl2Matrix {
    Sl2Matrix::from_i64(a, b, c, d).unwrap()
}

// Words in R^{±1}, L^{±1} reach every element of SL(2,Z) up to sign.
fn sl2() -> impl Strategy<Value = Sl2Matrix> {
    (prop::collection::vec(0u8..4, 0..10), any::<bool>()).prop_map(|(word, neg)| {
        let gens = [Sl2Matrix::r(), Sl2Matrix::l(), Sl2Matrix::r().inverse(), Sl2Matrix::l().inverse()];
        let prod = word.iter().fold(Sl2Matrix::identity(), |acc, &g| &acc * &gens[g as usize]);
        if neg {
            -&prod
        } else {
            prod
        }
    })
}

fn small_conjugators(bound: i64) -> Vec<Sl2Matrix> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    if a * d - b * c == 1 {
                        out.push(m(a, b, c, d));
                    }
                }
            }
        }
    }
    out
}

fn trace_oracle(p: i64, q: i64, r: i64) -> BigInt {
    BigInt::from((p - 1) * (q - 1) * (r - 1) - (p + q + r - 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn conjugates_are_recognised(x in sl2(), p in sl2()) {
        let y = x.conjugated_by(&p);
        let cert = is_conjugate(&x, &y);
        prop_assert!(cert.as_ref().is_some_and(|c| c.verify() && !c.to_inverse), "{x} vs {y}");
    }

    #[test]
    fn verdict_is_a_class_function(x in sl2(), y in sl2(), p in sl2(), q in sl2()) {
        let before = is_conjugate(&x, &y).is_some();
        let after = is_conjugate(&x.conjugated_by(&p), &y.conjugated_by(&q)).is_some();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn verdict_is_symmetric(x in sl2(), y in sl2()) {
        prop_assert_eq!(is_conjugate(&x, &y).is_some(), is_conjugate(&y, &x).is_some());
    }

    #[test]
    fn inverse_test_agrees_with_direct_test(x in sl2(), y in sl2()) {
        let inv = is_conjugate_to_inverse(&x, &y);
        prop_assert_eq!(inv.is_some(), is_conjugate(&x, &y.inverse()).is_some());
        if let Some(c) = inv {
            prop_assert!(c.to_inverse && c.verify());
        }
    }

    #[test]
    fn rl_factorisation_reassembles(x in sl2()) {
        prop_assume!(classify(&x) == Sl2Class::Hyperbolic);
        let f = rl_word(&x).unwrap();
        let signed = if f.negated { -&x } else { x.clone() };
        prop_assert_eq!(signed.conjugated_by(&f.conjugator), f.positive.clone());
        let product = f.letters.iter().fold(Sl2Matrix::identity(), |acc, l| &acc * &l.matrix());
        prop_assert_eq!(product, f.positive.clone());
        // the canonical word is a cyclic rotation, hence conjugate
        prop_assert!(is_conjugate(&f.word.matrix(), &f.positive).is_some());
        prop_assert_eq!(f.word.letter_count() as usize, f.letters.len());
    }

    #[test]
    fn cyclic_permutation_is_a_conjugacy(p in 2i64..15, q in 2i64..15, r in 2i64..15) {
        let a = monodromy_matrix(p, q, r).unwrap();
        let b = monodromy_matrix(q, r, p).unwrap();
        prop_assert!(is_conjugate(&a, &b).is_some_and(|c| c.verify()));
        prop_assert_eq!(a.trace(), trace_oracle(p, q, r));
    }

    #[test]
    fn twists_are_conjugate_to_the_alpha_twist(a in -20i64..20, b in -20i64..20) {
        prop_assume!(num_integer::gcd(a, b) == 1);
        let c = HomologyClass::new(a, b).unwrap();
        let cert = is_conjugate(&dehn_twist(HomologyClass::ALPHA), &dehn_twist(c));
        prop_assert!(cert.is_some_and(|x| x.verify()));
    }
}

// Exhaustive box search as an independent oracle for small matrices.
#[test]
fn agrees_with_box_search() {
    let conj = small_conjugators(3);
    let samples = [
        m(2, 1, 1, 1),
        m(3, 2, 1, 1),
        m(1, 1, 1, 2),
        m(5, -11, 1, -2),
        m(0, -1, 1, 3),
        m(1, 2, 1, 3),
        m(1, 1, 2, 3),
        m(-2, -1, -1, -1),
        m(0, 1, -1, 1),
        m(1, 3, 0, 1),
    ];
    for x in &samples {
        for p in &conj {
            let y = x.conjugated_by(p);
            for z in &samples {
                let found = conj.iter().any(|q| z.conjugated_by(q) == y);
                if found {
                    assert!(is_conjugate(z, &y).is_some(), "{z} ~ {y} missed");
                }
            }
        }
    }
}

#[test]
fn torus_relations() {
    let ta = dehn_twist(HomologyClass::ALPHA);
    let tb = dehn_twist(HomologyClass::BETA);
    // braid relation and (τ_α τ_β)⁶ = I
    assert_eq!(&(&ta * &tb) * &ta, &(&tb * &ta) * &tb);
    let w = TwistWord::new().push(HomologyClass::ALPHA, 1).push(HomologyClass::BETA, 1);
    assert!(evaluate_word(&w.repeat(6)).is_identity());
    assert_eq!(evaluate_word(&w.repeat(3)), -&Sl2Matrix::identity());
    assert_eq!(sl2z::intersection((1, 0), (0, 1)), 1);
}
