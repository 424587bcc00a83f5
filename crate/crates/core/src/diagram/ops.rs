//! Diagram surgery: folding, projection, diamond moves, island collapse, excise-and-glue.

use std::collections::VecDeque;
use std::sync::Arc;

use super::surface::{opp, Dart, Keep, Pinch, Surface};
use super::Diagram;
use crate::error::{Error, Result};
use crate::presentation::{build_presentation, Family, Presentation, Retraction};
use crate::word::{invert_letters, reduce_letters, same_alphabet, Image, Letter, Word};

/// Cells `u_i r_i u_i^-1` whose product is meant to equal `target` freely.
#[derive(Clone, Debug)]
pub struct Scheme {
    pub items: Vec<(Word, Word)>,
    pub target: Word,
}

/// Wedge of one lollipop per scheme item, in order, at the base.
pub fn lollipop(pres: Arc<Presentation>, scheme: &Scheme) -> Result<Diagram> {
    let alpha = pres.alphabet();
    if !same_alphabet(alpha, scheme.target.alphabet()) {
        return Err(Error::AlphabetMismatch("scheme target is over another alphabet".into()));
    }
    let mut product = Vec::new();
    for (u, r) in &scheme.items {
        if !same_alphabet(alpha, u.alphabet()) || !same_alphabet(alpha, r.alphabet()) {
            return Err(Error::AlphabetMismatch("scheme word over another alphabet".into()));
        }
        if !pres.is_relator_conjugate(r.letters()) {
            return Err(Error::Precondition(format!("{r} is not a relator conjugate")));
        }
        product.extend_from_slice(u.letters());
        product.extend_from_slice(r.letters());
        product.extend(invert_letters(u.letters()));
    }
    if reduce_letters(&product) != reduce_letters(scheme.target.letters()) {
        return Err(Error::Precondition("scheme product does not freely equal the target".into()));
    }
    let mut s = Surface::single(pres.clone());
    for (u, r) in &scheme.items {
        let mut lol = Surface::path(pres.clone(), u.letters());
        let poly = Surface::polygon(pres.clone(), r.letters());
        if u.is_empty() {
            lol = poly;
        } else {
            let tip = opp(2 * (u.len() as u32 - 1));
            lol.wedge(Some(tip), &poly, false);
        }
        let at = s.outer();
        s.wedge(at, &lol, false);
    }
    Ok(s.finish()?.0)
}

/// Stack-reduces the outer walk; sphere pinches are discarded.
pub(crate) fn fold_surface(s: &mut Surface) -> Result<()> {
    let walk = s.outer_walk();
    let mut stack: Vec<Dart> = Vec::new();
    for x in walk {
        if !s.is_alive(x) {
            continue;
        }
        if let Some(&t) = stack.last() {
            if s.sigma(t) == x && s.label(t) == s.label(x).inverse() && s.outer() != Some(x) {
                s.zip(t, Keep::First, Pinch::Discard)?;
                stack.pop();
                if s.outer().is_none() {
                    return Ok(());
                }
                continue;
            }
        }
        stack.push(x);
    }
    Ok(())
}

/// Folds cancelling boundary pairs away; the base corner is left alone.
pub fn fold(d: &Diagram) -> Result<Diagram> {
    d.validate().into_result()?;
    let mut s = d.to_surface();
    fold_surface(&mut s)?;
    Ok(s.finish()?.0)
}

/// Identifies dart `d1` with the inverse of its face successor.
pub fn identify_edges(d: &Diagram, d1: Dart) -> Result<Diagram> {
    if d1 as usize >= d.dart_count() {
        return Err(Error::Param(format!("no dart {d1}")));
    }
    let mut s = d.to_surface();
    s.zip(d1, Keep::First, Pinch::Error)?;
    Ok(s.finish()?.0)
}

impl Surface {
    /// Drops dart `x` from its face cycle, moving the outer dart along if needed.
    fn unlink_dart(&mut self, x: Dart) {
        let p = self.sigma_inv[x as usize];
        let s = self.sigma[x as usize];
        if self.outer == Some(x) {
            self.outer = if p == x { None } else { Some(s) };
        }
        if p != x {
            self.link(p, s);
        }
        self.link(x, x);
        self.alive[x as usize] = false;
    }

    fn contract_or_drop(&mut self, d: Dart) {
        let u = self.vertex(d);
        let v = self.head(d);
        self.unlink_dart(d);
        self.unlink_dart(opp(d));
        if u != v {
            self.union_into(v, u);
        } else {
            self.discard_unreachable();
        }
        if self.outer.is_none() {
            self.alive.iter_mut().for_each(|a| *a = false);
        }
    }

    /// Zips every cancelling corner inside inner faces.
    fn reduce_inner_faces(&mut self) -> Result<()> {
        let n = self.dart_count();
        let mut outer_side = vec![false; n];
        if self.outer.is_some() {
            for x in self.outer_walk() {
                outer_side[x as usize] = true;
            }
        }
        let mut queue: VecDeque<Dart> = self.live_darts().collect();
        while let Some(d1) = queue.pop_front() {
            if !self.is_alive(d1) || outer_side[d1 as usize] {
                continue;
            }
            let d2 = self.sigma(d1);
            if d1 == d2 || !self.is_alive(d2) || self.label(d2) != self.label(d1).inverse() {
                continue;
            }
            let a = self.sigma_inv[d1 as usize];
            let og = opp(d2);
            let og_outer = outer_side[og as usize];
            self.zip(d1, Keep::First, Pinch::Discard)?;
            if self.outer.is_none() {
                return Ok(());
            }
            if og_outer && self.is_alive(d1) {
                outer_side[d1 as usize] = true;
            }
            for x in [a, d1, self.sigma_inv[d1 as usize]] {
                if self.is_alive(x) {
                    queue.push_back(x);
                }
            }
        }
        Ok(())
    }
}

/// Image of a diagram under a letter map, folded so its boundary is the reduced image.
pub fn project(d: &Diagram, theta: &Retraction) -> Result<Diagram> {
    project_with(d, theta, true)
}

pub fn project_with(d: &Diagram, theta: &Retraction, fold_boundary: bool) -> Result<Diagram> {
    if !same_alphabet(d.presentation().alphabet(), theta.source.alphabet()) {
        return Err(Error::AlphabetMismatch(format!("{} does not start from this presentation", theta.name)));
    }
    let mut s = d.to_surface();
    let mut erased = Vec::new();
    for x in 0..s.dart_count() as u32 {
        match theta.map.image_of(s.label[x as usize]) {
            Image::Letter(l) => s.label[x as usize] = l,
            Image::Erase => {
                if x & 1 == 0 {
                    erased.push(x);
                }
            }
        }
    }
    s.pres = theta.target.clone();
    for x in erased {
        if s.is_alive(x) {
            s.contract_or_drop(x);
        }
    }
    if s.outer.is_some() {
        s.reduce_inner_faces()?;
    }
    if fold_boundary && s.outer.is_some() {
        fold_surface(&mut s)?;
    }
    Ok(s.finish()?.0)
}

/// Splits `v` between outgoing darts `d1`, `d2` with equal labels and refolds at their heads.
pub fn diamond_move(d: &Diagram, v: u32, d1: Dart, d2: Dart) -> Result<Diagram> {
    let nd = d.dart_count() as u32;
    if d1 >= nd || d2 >= nd || (d1 >> 1) == (d2 >> 1) {
        return Err(Error::Precondition("diamond move needs two distinct edges".into()));
    }
    if d.tail(d1) != v || d.tail(d2) != v {
        return Err(Error::Precondition(format!("darts must both leave vertex {v}")));
    }
    if d.label(d1) != d.label(d2) {
        return Err(Error::Precondition("diamond move needs a cancelling pair".into()));
    }
    if d.head(d1) == v || d.head(d2) == v || d.head(d1) == d.head(d2) {
        return Err(Error::Precondition("diamond move needs three distinct vertices".into()));
    }
    let mut s = d.to_surface();
    let q1 = s.cut_path(&[opp(d1), d2])?;
    let q2 = s.sigma(q1);
    let back = s.sigma(q2);
    s.zip(q1, Keep::First, Pinch::Error)?;
    s.zip(back, Keep::First, Pinch::Error)?;
    Ok(s.finish()?.0)
}

/// What happened to one island during collapse.
#[derive(Clone, Debug)]
pub struct IslandTrace {
    pub faces: usize,
    pub boundary: String,
    pub tree_edges: Vec<u32>,
}

/// Replaces every island (a maximal edge-connected cluster of `Pk` cells) by the tree its
/// `t`-boundary folds to, returning a diagram over `Qm`.
pub fn collapse_islands(d: &Diagram) -> Result<(Diagram, Vec<IslandTrace>)> {
    let (k, m) = match *d.presentation().family() {
        Family::Skm { k, m } => (k, m),
        ref f => return Err(Error::WrongFamily(format!("island collapse needs an Skm diagram, got {f}"))),
    };
    let pk = build_presentation(&Family::Pk { k })?;
    let qm = Arc::new(build_presentation(&Family::Qm { m })?);
    let alpha = d.presentation().alphabet();
    let t = alpha.require("t")?;
    let in_pk: Vec<bool> = alpha.symbols().iter().map(|n| pk.alphabet().index(n).is_some()).collect();
    let faces = d.faces();
    let nf = faces.cycles.len();
    let island: Vec<bool> = (0..nf)
        .map(|f| {
            !faces.is_outer(f as u32)
                && faces.cycles[f].iter().all(|&x| in_pk[d.label(x).sym() as usize])
        })
        .collect();
    // components of island faces across shared edges
    let mut comp: Vec<u32> = (0..nf as u32).collect();
    fn root(c: &mut [u32], mut x: u32) -> u32 {
        while c[x as usize] != x {
            c[x as usize] = c[c[x as usize] as usize];
            x = c[x as usize];
        }
        x
    }
    for x in 0..d.dart_count() as u32 {
        let (a, b) = (faces.face_of[x as usize], faces.face_of[opp(x) as usize]);
        if island[a as usize] && island[b as usize] {
            let (ra, rb) = (root(&mut comp, a), root(&mut comp, b));
            if ra != rb {
                comp[ra.max(rb) as usize] = ra.min(rb);
            }
        }
    }
    let mut roots: Vec<u32> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    let mut island_of_face = vec![u32::MAX; nf];
    for f in 0..nf {
        if island[f] {
            let r = root(&mut comp, f as u32);
            let i = match roots.iter().position(|&x| x == r) {
                Some(i) => i,
                None => {
                    roots.push(r);
                    sizes.push(0);
                    roots.len() - 1
                }
            };
            sizes[i] += 1;
            island_of_face[f] = i as u32;
        }
    }
    let mut s = d.to_surface();
    let (sface_of, _) = s.faces();
    // surface faces are indexed differently; map through a representative dart
    let mut remove = vec![false; sface_of.iter().filter(|&&f| f != u32::MAX).max().map_or(0, |&m| m as usize + 1)];
    for x in 0..d.dart_count() {
        if island[faces.face_of[x] as usize] {
            remove[sface_of[x] as usize] = true;
        }
    }
    let holes = s.excise(&remove);
    let mut hole_of: Vec<Option<Dart>> = vec![None; roots.len()];
    for h in holes {
        let i = island_of_face[faces.face_of[h as usize] as usize] as usize;
        if hole_of[i].is_some() {
            return Err(Error::Amalgam(format!("island {i} has more than one boundary cycle")));
        }
        hole_of[i] = Some(h);
    }
    let mut traces = Vec::with_capacity(roots.len());
    let mut survivors: Vec<Vec<Dart>> = Vec::with_capacity(roots.len());
    for (i, h) in hole_of.iter().enumerate() {
        let h = h.ok_or_else(|| Error::Amalgam(format!("island {i} has no boundary")))?;
        let cyc = s.walk(h);
        let word = s.word_of(&cyc);
        let text = alpha.format_letters(&word);
        if word.iter().any(|l| l.sym() != t) || !reduce_letters(&word).is_empty() {
            return Err(Error::Amalgam(format!("island {i} has boundary {text}, not a trivial word in t")));
        }
        collapse_hole(&mut s, h)?;
        survivors.push(cyc);
        traces.push(IslandTrace { faces: sizes[i], boundary: text, tree_edges: Vec::new() });
    }
    let (out, map) = s.finish()?;
    for (tr, cyc) in traces.iter_mut().zip(&survivors) {
        let mut es: Vec<u32> = cyc.iter().filter_map(|&x| map[x as usize]).map(|x| x >> 1).collect();
        es.sort_unstable();
        es.dedup();
        tr.tree_edges = es;
    }
    Ok((out.transfer(qm)?, traces))
}

/// Zips a hole whose boundary freely reduces to the empty word.
fn collapse_hole(s: &mut Surface, mut h: Dart) -> Result<()> {
    loop {
        let cyc = s.walk(h);
        if cyc.is_empty() {
            return Ok(());
        }
        let cancels = |x: Dart| {
            let y = s.sigma(x);
            x != y && s.label(y) == s.label(x).inverse()
        };
        let pick = cyc
            .iter()
            .copied()
            .find(|&x| cancels(x) && s.vertex(x) != s.head(s.sigma(x)))
            .or_else(|| cyc.iter().copied().find(|&x| cancels(x)));
        let Some(x) = pick else {
            return Err(Error::Amalgam("island boundary cannot be folded".into()));
        };
        let y = s.sigma(x);
        let a = s.sigma_inv(x);
        let closing = cyc.len() == 2;
        s.zip(x, Keep::First, Pinch::Error)?;
        if closing || a == y {
            return Ok(());
        }
        h = a;
    }
}

fn is_disc(d: &Diagram) -> bool {
    if d.area() == 0 {
        return false;
    }
    let walk = d.boundary_darts();
    let mut vs: Vec<u32> = walk.iter().map(|&x| d.tail(x)).collect();
    vs.sort_unstable();
    vs.dedup();
    vs.len() == walk.len()
}

/// Removes the region enclosed by the closed edge path `circuit` and glues `replacement`
/// in its place; the replacement boundary must read the circuit word up to rotation.
pub fn excise_and_glue(d: &Diagram, circuit: &[Dart], replacement: &Diagram) -> Result<Diagram> {
    if circuit.is_empty() {
        return Err(Error::Precondition("empty circuit".into()));
    }
    let nd = d.dart_count() as u32;
    if circuit.iter().any(|&c| c >= nd) {
        return Err(Error::Param("circuit names an unknown dart".into()));
    }
    for i in 0..circuit.len() {
        if d.head(circuit[i]) != d.tail(circuit[(i + 1) % circuit.len()]) {
            return Err(Error::Precondition("circuit is not a closed edge path".into()));
        }
    }
    let mut vs: Vec<u32> = circuit.iter().map(|&c| d.tail(c)).collect();
    vs.sort_unstable();
    vs.dedup();
    let simple = vs.len() == circuit.len();
    if !simple && !is_disc(replacement) {
        return Err(Error::PlanarityHazard(
            "circuit is not simple, so the replacement must be a disc".into(),
        ));
    }
    if replacement.presentation().to_text() != d.presentation().to_text() {
        return Err(Error::AlphabetMismatch("replacement is over another presentation".into()));
    }
    let faces = d.faces();
    let mut on_circuit = vec![false; d.edge_count()];
    for &c in circuit {
        on_circuit[(c >> 1) as usize] = true;
    }
    let nf = faces.cycles.len();
    let mut reached = vec![false; nf];
    if let Some(o) = faces.outer {
        reached[o as usize] = true;
        let mut stack = vec![o];
        while let Some(f) = stack.pop() {
            for &x in &faces.cycles[f as usize] {
                if on_circuit[(x >> 1) as usize] {
                    continue;
                }
                let g = faces.face_of[opp(x) as usize];
                if !reached[g as usize] {
                    reached[g as usize] = true;
                    stack.push(g);
                }
            }
        }
    }
    if reached.iter().all(|&r| r) {
        return Err(Error::Precondition("circuit encloses no faces".into()));
    }
    let mut s = d.to_surface();
    let (sface_of, scycles) = s.faces();
    let mut remove = vec![false; scycles.len()];
    for x in 0..d.dart_count() {
        if !reached[faces.face_of[x] as usize] {
            remove[sface_of[x] as usize] = true;
        }
    }
    let holes = s.excise(&remove);
    if holes.len() != 1 {
        return Err(Error::PlanarityHazard(format!("enclosed region leaves {} holes", holes.len())));
    }
    let hole = holes[0];
    let hw = s.word_of(&s.walk(hole));
    let want = invert_letters(&hw);
    let mut rep = replacement.to_surface();
    for mirrored in [false, true] {
        if mirrored {
            rep.mirror();
        }
        let rw = rep.outer_walk();
        let letters = rep.word_of(&rw);
        if letters.len() != want.len() {
            continue;
        }
        for o in 0..rw.len() {
            let mut rot = letters[o..].to_vec();
            rot.extend_from_slice(&letters[..o]);
            if rot == want {
                rep.rebase(rw[o]);
                s.fill_face(hole, &rep, Pinch::Error)?;
                return Ok(s.finish()?.0);
            }
        }
    }
    Err(Error::Precondition(format!(
        "replacement boundary does not match the circuit word {}",
        d.presentation().alphabet().format_letters(&want)
    )))
}

#[allow(dead_code)]
fn letters_of(d: &Diagram, darts: &[Dart]) -> Vec<Letter> {
    d.word_of(darts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::retraction;

    fn z2() -> Arc<Presentation> {
        Arc::new(Presentation::custom("Z2", &["a", "t"], &["a t a^-1 t^-1"]).unwrap())
    }

    fn w(p: &Arc<Presentation>, s: &str) -> Word {
        p.word(s).unwrap()
    }

    /// Rotates the base so the walk ends with `tail`.
    fn ending_with(s: &mut Surface, tail: &[Letter]) {
        let walk = s.outer_walk();
        let n = walk.len();
        for o in 0..n {
            let ok = (0..tail.len()).all(|i| s.label(walk[(o + n - tail.len() + i) % n]) == tail[i]);
            if ok {
                s.rebase(walk[o]);
                return;
            }
        }
        panic!("no rotation ends with the requested letters");
    }

    #[test]
    fn lollipop_shape() {
        let p = z2();
        let sch = Scheme {
            items: vec![(w(&p, "a"), w(&p, "a t a^-1 t^-1"))],
            target: w(&p, "a a t a^-1 t^-1 a^-1"),
        };
        let d = lollipop(p.clone(), &sch).unwrap();
        assert!(d.is_valid(), "{}", d.validate());
        assert_eq!(d.area(), 1);
        assert_eq!(d.vertex_count(), 5);
        assert_eq!(d.boundary_word().to_string(), "a a t a^-1 t^-1 a^-1");
        assert_eq!(d.idiam(), 3);
        // stem t, then the square: far corner sits 1 + 2 from the base
        let sch = Scheme {
            items: vec![(w(&p, "t"), w(&p, "a t a^-1 t^-1"))],
            target: w(&p, "t a t a^-1 t^-1 t^-1"),
        };
        let d = lollipop(p, &sch).unwrap();
        assert!(d.is_valid());
        let far = d.distances_from(&[d.base()]).into_iter().max().unwrap();
        assert_eq!(d.idiam(), far);
        assert_eq!(d.idiam(), 3);
    }

    #[test]
    fn lollipop_rejects_wrong_product() {
        let p = z2();
        let sch = Scheme { items: vec![(w(&p, "1"), w(&p, "a t a^-1 t^-1"))], target: w(&p, "a") };
        assert!(lollipop(p, &sch).is_err());
    }

    #[test]
    fn fold_reduces_boundary() {
        let p = z2();
        let r = "a t a^-1 t^-1";
        let sch = Scheme {
            items: vec![(w(&p, "t"), w(&p, r)), (w(&p, "t"), w(&p, r))],
            target: w(&p, &format!("t {r} t^-1 t {r} t^-1")),
        };
        let d = lollipop(p.clone(), &sch).unwrap();
        let f = fold(&d).unwrap();
        assert!(f.is_valid(), "{}", f.validate());
        assert_eq!(f.area(), 2);
        assert!(f.boundary_word().is_freely_reduced());
        assert_eq!(f.boundary_word().to_string(), "t a t a^-1 t^-1 a t a^-1 t^-1 t^-1");
    }

    #[test]
    fn identity_projection_is_structural_identity() {
        let p = z2();
        let sq = Surface::polygon(p.clone(), &w(&p, "a t a^-1 t^-1").into_letters()).finish().unwrap().0;
        let id = Retraction::identity(p);
        assert_eq!(project(&sq, &id).unwrap(), sq);
    }

    #[test]
    fn projection_to_cyclic_group() {
        let p = z2();
        let sq = Surface::polygon(p.clone(), &w(&p, "a t a^-1 t^-1").into_letters()).finish().unwrap().0;
        let phi = retraction("phi_t", p).unwrap();
        let img = project(&sq, &phi).unwrap();
        assert!(img.is_valid());
        assert_eq!(img.area(), 0);
        assert_eq!(img.vertex_count(), 1);
    }

    #[test]
    fn pinching_identification_is_refused() {
        let p = z2();
        // two squares glued along three sides leave a boundary a a^-1 enclosing them
        let mut s = Surface::polygon(p.clone(), &w(&p, "a t a^-1 t^-1").into_letters());
        let walk = s.outer_walk();
        let mut other = Surface::polygon(p.clone(), &w(&p, "a t a^-1 t^-1").into_letters());
        other.mirror();
        let want = invert_letters(&s.word_of(&walk[1..]));
        ending_with(&mut other, &want);
        s.glue_arc(&walk[1..], &other, Pinch::Error).unwrap();
        let mut stem = Surface::path(p.clone(), &w(&p, "t").into_letters());
        let tip = opp(0);
        stem.wedge(Some(tip), &s, false);
        let d = stem.finish().unwrap().0;
        assert!(d.is_valid(), "{}", d.validate());
        let walk = d.boundary_darts();
        let corner = walk.iter().copied().find(|&x| {
            d.label(x) == d.label(d.sigma(x)).inverse() && d.tail(x) == d.head(d.sigma(x)) && d.label(x).sym() == 0
        });
        let err = identify_edges(&d, corner.unwrap()).unwrap_err();
        assert!(matches!(err, Error::PlanarityHazard(_)), "{err}");
    }

    #[test]
    fn replace_face_by_itself() {
        let p = z2();
        let sq = Surface::polygon(p.clone(), &w(&p, "a t a^-1 t^-1").into_letters()).finish().unwrap().0;
        let mut s = sq.to_surface();
        let walk = s.outer_walk();
        let o = Surface::polygon(p.clone(), &w(&p, "a t a^-1 t^-1").into_letters());
        let mut m = o.clone();
        m.mirror();
        let want = invert_letters(&s.word_of(&walk[..1]));
        ending_with(&mut m, &want);
        s.glue_arc(&walk[..1], &m, Pinch::Error).unwrap();
        let two = s.finish().unwrap().0;
        assert!(two.is_valid(), "{}", two.validate());
        let faces = two.faces();
        let (_, cyc) = faces.inner().next().unwrap();
        let circuit: Vec<Dart> = cyc.iter().rev().map(|&x| opp(x)).collect();
        let out = excise_and_glue(&two, &circuit, &sq).unwrap();
        assert!(out.is_valid(), "{}", out.validate());
        assert_eq!(out.area(), 2);
        assert_eq!(out.boundary_word(), two.boundary_word());
    }

    #[test]
    fn singular_replacement_on_simple_circuit() {
        let p = z2();
        let sqw = w(&p, "a t a^-1 t^-1").into_letters();
        // a square with its mirror on one t side: simple boundary a a^-1 t a a^-1 t^-1
        let mut s = Surface::polygon(p.clone(), &sqw);
        let walk = s.outer_walk();
        let mut m = Surface::polygon(p.clone(), &sqw);
        m.mirror();
        let mw = m.outer_walk();
        let pos = mw.iter().position(|&x| m.label(x) == m.label(walk[1]).inverse()).unwrap();
        m.rebase(mw[(pos + 1) % 4]);
        s.glue_arc(&walk[1..2], &m, Pinch::Error).unwrap();
        let region = s.outer_walk();
        assert_eq!(p.alphabet().format_letters(&s.word_of(&region)), "a a^-1 t a a^-1 t^-1");
        // one more square outside, along the last t edge
        let mut extra = Surface::polygon(p.clone(), &sqw);
        extra.mirror();
        let ew = extra.outer_walk();
        let pos = ew.iter().position(|&x| extra.label(x) == s.label(region[5]).inverse()).unwrap();
        extra.rebase(ew[(pos + 1) % 4]);
        s.glue_arc(&region[5..6], &extra, Pinch::Error).unwrap();
        let (host, map) = s.finish().unwrap();
        assert!(host.is_valid(), "{}", host.validate());
        let circuit: Vec<Dart> = region.iter().map(|&x| map[x as usize].unwrap()).collect();
        // a tree reading the same word
        let mut t = Surface::single(p.clone());
        t.spike(None, &w(&p, "a").into_letters(), true);
        let o = t.outer();
        let tt = t.spike(o, &w(&p, "t").into_letters(), false);
        t.spike(Some(opp(tt[0])), &w(&p, "a").into_letters(), false);
        assert_eq!(p.alphabet().format_letters(&t.boundary_letters()), "a a^-1 t a a^-1 t^-1");
        let tree = t.finish().unwrap().0;
        let out = excise_and_glue(&host, &circuit, &tree).unwrap();
        assert!(out.is_valid(), "{}", out.validate());
        assert_eq!(out.area(), 1);
    }
}
