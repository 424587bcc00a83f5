#![allow(dead_code)]

use std::sync::Arc;

use fillscope::diagram::{fold, lollipop, Scheme};
use fillscope::word::invert_letters;
use fillscope::{build_presentation, Diagram, Family, Letter, Presentation, Word};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_letters(rng: &mut ChaCha8Rng, gens: usize, len: usize) -> Vec<Letter> {
    (0..len).map(|_| Letter::new(rng.gen_range(0..gens) as u32, rng.gen_bool(0.5))).collect()
}

/// A random rotation of a random relator or its inverse.
pub fn random_relator_conjugate(rng: &mut ChaCha8Rng, p: &Presentation) -> Vec<Letter> {
    let r = &p.relators()[rng.gen_range(0..p.relators().len())];
    let mut w = r.letters().to_vec();
    if rng.gen_bool(0.5) {
        w = invert_letters(&w);
    }
    let k = rng.gen_range(0..w.len());
    w.rotate_left(k);
    w
}

pub fn random_scheme(rng: &mut ChaCha8Rng, p: &Arc<Presentation>, max_items: usize, max_u: usize) -> Scheme {
    let a = p.alphabet().clone();
    let n = rng.gen_range(1..=max_items);
    let mut items = Vec::new();
    let mut product = Vec::new();
    for _ in 0..n {
        let ul = rng.gen_range(0..=max_u);
        let u = random_letters(rng, a.len(), ul);
        let r = random_relator_conjugate(rng, p);
        product.extend_from_slice(&u);
        product.extend_from_slice(&r);
        product.extend(invert_letters(&u));
        items.push((Word::new(a.clone(), u).unwrap(), Word::new(a.clone(), r).unwrap()));
    }
    Scheme { items, target: Word::new(a, product).unwrap() }
}

/// A lollipop diagram, folded half of the time.
pub fn random_diagram(rng: &mut ChaCha8Rng, p: &Arc<Presentation>) -> Diagram {
    let s = random_scheme(rng, p, 4, 3);
    let d = lollipop(p.clone(), &s).unwrap();
    if rng.gen_bool(0.5) {
        fold(&d).unwrap()
    } else {
        d
    }
}

/// Presentations paired with letter sets whose relators carry zero or two of them.
pub fn hypothesis_cases() -> Vec<(Arc<Presentation>, Vec<&'static str>)> {
    let fam = |f: Family| Arc::new(build_presentation(&f).unwrap());
    vec![
        (fam(Family::Ok { k: 2 }), vec!["f"]),
        (fam(Family::Ok { k: 2 }), vec!["g"]),
        (fam(Family::Ok { k: 3 }), vec!["f", "g"]),
        (fam(Family::Bm { m: 2 }), vec!["t"]),
        (fam(Family::Qm { m: 2 }), vec!["t"]),
        (fam(Family::Qm { m: 2 }), vec!["tau"]),
        (fam(Family::HatPk { k: 2 }), vec!["s1"]),
        (fam(Family::HatPk { k: 2 }), vec!["s2", "t"]),
        (Arc::new(Presentation::custom("Z2", &["s1", "s2"], &["s1^-1 s2^-1 s1 s2"]).unwrap()), vec!["s1"]),
    ]
}

pub fn syms(p: &Presentation, names: &[&str]) -> Vec<u32> {
    names.iter().map(|n| p.sym(n).unwrap()).collect()
}
