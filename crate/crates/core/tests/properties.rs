mod common;

use std::sync::Arc;

use fillscope::constructions::bpower_stack;
use fillscope::corridors::{trace_corridors, End};
use fillscope::diagram::format::{from_text, to_text};
use fillscope::diagram::project;
use fillscope::metrics::{ediam_lower_retraction, t_distortion_bound};
use fillscope::models::GroupModel;
use fillscope::{build_presentation, retraction, Alphabet, Family, Letter, LetterMap, Word};
use proptest::prelude::*;

fn alphabet() -> Arc<Alphabet> {
    Arc::new(Alphabet::new(["a", "b", "c"]).unwrap())
}

fn letters(n: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0u32..3, any::<bool>()).prop_map(|(s, i)| Letter::new(s, i)), 0..n)
}

fn word(n: usize) -> impl Strategy<Value = Word> {
    letters(n).prop_map(|l| Word::new(alphabet(), l).unwrap())
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (2usize..=4).prop_map(|k| Family::Ok { k }),
        (2usize..=4).prop_map(|k| Family::HatOk { k }),
        (1usize..=3).prop_map(|m| Family::Bm { m }),
    ]
}

fn model_for(f: &Family) -> GroupModel {
    match *f {
        Family::Ok { k } => GroupModel::theta(k).unwrap(),
        Family::HatOk { k } => GroupModel::hat_theta(k).unwrap(),
        Family::Bm { m } => GroupModel::bm(m).unwrap(),
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn free_reduce_idempotent(w in word(40)) {
        let r = w.free_reduce();
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(r.len() <= w.len());
        prop_assert_eq!(w.len() % 2, r.len() % 2);
    }

    #[test]
    fn exponent_sums_survive_reduction_and_rotation(w in word(40), k in 0usize..40) {
        let r = w.free_reduce();
        let mut rot = w.letters().to_vec();
        if !rot.is_empty() {
            let n = rot.len();
            rot.rotate_left(k % n);
        }
        let rot = Word::new(alphabet(), rot).unwrap();
        for x in ["a", "b", "c"] {
            let e = w.exponent_sum(x).unwrap();
            prop_assert_eq!(r.exponent_sum(x).unwrap(), e);
            prop_assert_eq!(rot.exponent_sum(x).unwrap(), e);
        }
    }

    #[test]
    fn maps_commute_with_reduction(w in word(30), imgs in prop::collection::vec(letters(2), 3)) {
        let a = alphabet();
        let names: Vec<(String, String)> = ["a", "b", "c"]
            .iter()
            .zip(&imgs)
            .map(|(n, l)| (n.to_string(), a.format_letters(l)))
            .collect();
        let pairs: Vec<(&str, &str)> = names.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let map = LetterMap::from_names(a.clone(), a.clone(), &pairs).unwrap();
        let direct = map.map_word(&w).unwrap().free_reduce();
        let reduced_first = map.map_word(&w.free_reduce()).unwrap().free_reduce();
        prop_assert_eq!(direct, reduced_first);
    }

    #[test]
    fn eval_is_a_homomorphism(f in family(), seed in any::<u64>()) {
        let p = build_presentation(&f).unwrap();
        let model = model_for(&f);
        let mut rng = common::rng(seed);
        let n = p.alphabet().len();
        let u = Word::new(p.alphabet().clone(), common::random_letters(&mut rng, n, 12)).unwrap();
        let v = Word::new(p.alphabet().clone(), common::random_letters(&mut rng, n, 12)).unwrap();
        let uv = model.eval(&u.concat(&v).unwrap()).unwrap();
        let prod = model.mul(&model.eval(&u).unwrap(), &model.eval(&v).unwrap());
        prop_assert_eq!(uv, prod);
        let inv = model.eval(&u.inverse()).unwrap();
        prop_assert_eq!(inv, model.inverse(&model.eval(&u).unwrap()));
    }

    #[test]
    fn diagram_format_round_trips(seed in any::<u64>(), case in 0usize..9) {
        let cases = common::hypothesis_cases();
        let (p, _) = &cases[case];
        let mut rng = common::rng(seed);
        let d = common::random_diagram(&mut rng, p);
        let text = to_text(&d, None);
        let (back, cert) = from_text(&text).unwrap();
        prop_assert!(cert.is_none());
        prop_assert!(back.is_valid());
        prop_assert_eq!(to_text(&back, None), text);
        prop_assert_eq!(back.boundary_word(), d.boundary_word());
    }

    #[test]
    fn projections_stay_valid(seed in any::<u64>(), k in 2usize..=3) {
        let p = Arc::new(build_presentation(&Family::Pk { k }).unwrap());
        let psi = retraction("psi", p.clone()).unwrap();
        let mut rng = common::rng(seed);
        let d = common::random_diagram(&mut rng, &p);
        let img = project(&d, &psi).unwrap();
        prop_assert!(img.is_valid(), "{}", img.validate());
        let want = psi.map.map_word(&d.boundary_word()).unwrap();
        prop_assert!(img.boundary_word().freely_equal(&want));
    }

    #[test]
    fn retraction_potential_below_idiam(seed in any::<u64>(), which in 0usize..2) {
        let p = Arc::new(build_presentation(&Family::Ok { k: 2 }).unwrap());
        let r = retraction(["phi_f", "phi_g"][which], p.clone()).unwrap();
        let mut rng = common::rng(seed);
        let d = common::random_diagram(&mut rng, &p);
        let (low, _) = ediam_lower_retraction(&d, &r).unwrap();
        prop_assert!(low <= d.idiam() as u64);
    }

    #[test]
    fn t_bound_monotone(n in 0usize..30, extra in 1usize..10) {
        let p = build_presentation(&Family::Pk { k: 2 }).unwrap();
        let a = p.word(&format!("t^{n}")).unwrap();
        let b = p.word(&format!("t^{}", n + extra)).unwrap();
        prop_assert!(t_distortion_bound(2, &a).unwrap() <= t_distortion_bound(2, &b).unwrap());
    }

    #[test]
    fn corridor_ends_lie_on_the_boundary(seed in any::<u64>(), case in 0usize..9) {
        let cases = common::hypothesis_cases();
        let (p, names) = &cases[case];
        let mut rng = common::rng(seed);
        let d = common::random_diagram(&mut rng, p);
        let rep = trace_corridors(&d, &common::syms(p, names), false).unwrap();
        let fi = d.faces();
        for c in &rep.corridors {
            for end in &c.ends {
                match *end {
                    End::Boundary(x) => prop_assert!(fi.is_outer(fi.face_of[x as usize])),
                    End::Cell(..) => prop_assert!(false, "plain tracing ended in a cell"),
                }
            }
        }
    }
}

#[test]
fn relators_are_trivial_in_models() {
    for f in [
        Family::Ok { k: 2 },
        Family::Ok { k: 5 },
        Family::HatOk { k: 2 },
        Family::HatOk { k: 4 },
        Family::Bm { m: 1 },
        Family::Bm { m: 4 },
    ] {
        let p = build_presentation(&f).unwrap();
        let model = model_for(&f);
        for r in p.relators() {
            assert!(model.is_identity(&model.eval(r).unwrap()), "{f}: {r}");
        }
        assert!(model.presents(&p));
    }
}

#[test]
fn bpower_rows_triple() {
    for m in 1..=10u32 {
        for hatted in [false, true] {
            let b = bpower_stack(2, m as usize, hatted).unwrap();
            let d = &b.diagram;
            assert!(d.is_valid());
            let top = b.arc("top").unwrap();
            assert_eq!(top.len(), 3usize.pow(m));
            let bsym = d.presentation().sym("b").unwrap();
            assert!(top.iter().all(|&x| d.label(x).sym() == bsym));
            if m <= 6 && !hatted {
                let rep = fillscope::corridors::extended_skt_corridors(d).unwrap();
                let h = |ds: &[u32]| d.word_of(ds).iter().map(|l| l.sign()).sum::<i64>().abs();
                let mut low: Vec<i64> = rep
                    .corridors
                    .iter()
                    .map(|c| {
                        let (l, r) = (h(&c.left), h(&c.right));
                        assert!(l == 3 * r || r == 3 * l, "m={m}: sides {l} {r}");
                        l.min(r)
                    })
                    .collect();
                low.sort();
                let want: Vec<i64> = (0..m).map(|i| 3i64.pow(i)).collect();
                assert_eq!(low, want, "m={m} hatted={hatted}");
            }
        }
    }
}

#[test]
fn t_bound_holds_on_larger_shortcuts() {
    for m in 11..=13 {
        let b = fillscope::constructions::delta_m_diagram(2, m).unwrap();
        let u = b.word("u_m").unwrap();
        assert!(m as u128 <= t_distortion_bound(2, &u).unwrap(), "m={m}");
    }
}
