//! Corridors and rings: chains of cells dual to edges carrying a chosen set of letters.

use std::collections::VecDeque;

use crate::diagram::{dart_name, opp, Dart, Diagram, FaceIndex};
use crate::error::{Error, Result};
use crate::presentation::Family;
use crate::word::Letter;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    /// A traced dart on the outer face.
    Boundary(Dart),
    /// A cell carrying a single traced letter, entered through the given dart.
    Cell(u32, Dart),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorridorKind {
    Plain,
    Extended,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corridor {
    pub cells: Vec<u32>,
    /// traced edges in dual-path order, one more than the number of cells
    pub edges: Vec<u32>,
    /// dart of each cell on its entering and leaving edge
    pub entry: Vec<Dart>,
    pub exit: Vec<Dart>,
    pub ends: [End; 2],
    pub left: Vec<Dart>,
    pub right: Vec<Dart>,
    pub kind: CorridorKind,
}

impl Corridor {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub cells: Vec<u32>,
    pub edges: Vec<u32>,
    pub entry: Vec<Dart>,
    pub exit: Vec<Dart>,
    pub inside: Vec<Dart>,
    pub outside: Vec<Dart>,
}

#[derive(Clone, Debug, Default)]
pub struct CorridorReport {
    pub letters: Vec<u32>,
    pub corridors: Vec<Corridor>,
    pub rings: Vec<Ring>,
}

fn side_darts(d: &Diagram, entry: &[Dart], exit: &[Dart]) -> (Vec<Dart>, Vec<Dart>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (&x, &y) in entry.iter().zip(exit) {
        let mut z = d.sigma(x);
        while z != y {
            left.push(z);
            z = d.sigma(z);
        }
        let mut seg = Vec::new();
        let mut z = d.sigma(y);
        while z != x {
            seg.push(opp(z));
            z = d.sigma(z);
        }
        seg.reverse();
        right.extend(seg);
    }
    (left, right)
}

struct Tracer<'a> {
    d: &'a Diagram,
    fi: FaceIndex,
    traced: Vec<bool>,
    /// traced darts of each face
    hits: Vec<Vec<Dart>>,
    seen: Vec<bool>,
}

enum Step {
    Cell(u32, Dart, Dart),
    Stop(End),
}

impl Tracer<'_> {
    fn is_traced(&self, x: Dart) -> bool {
        self.traced[self.d.label(x).sym() as usize]
    }

    /// Crosses the edge of `x` into the face of `opp(x)`.
    fn cross(&self, x: Dart) -> Step {
        let y = opp(x);
        let f = self.fi.face_of[y as usize];
        if self.fi.is_outer(f) {
            return Step::Stop(End::Boundary(y));
        }
        let h = &self.hits[f as usize];
        if h.len() == 1 {
            return Step::Stop(End::Cell(f, y));
        }
        let other = if h[0] == y { h[1] } else { h[0] };
        Step::Cell(f, y, other)
    }
}

/// Every relator has zero or two traced letters; one is allowed too when `extended`.
pub fn check_hypothesis(d: &Diagram, letters: &[u32], extended: bool) -> Result<()> {
    let p = d.presentation();
    for r in p.relators() {
        let c = r.letters().iter().filter(|l| letters.contains(&l.sym())).count();
        if !(c == 0 || c == 2 || (extended && c == 1)) {
            return Err(Error::Hypothesis(format!("{r} ({c} traced letters)")));
        }
    }
    Ok(())
}

/// Traces every corridor and ring of the given letters.
pub fn trace_corridors(d: &Diagram, letters: &[u32], extended: bool) -> Result<CorridorReport> {
    check_hypothesis(d, letters, extended)?;
    let fi = d.faces();
    let mut traced = vec![false; d.presentation().alphabet().len()];
    for &s in letters {
        traced[s as usize] = true;
    }
    let mut hits = vec![Vec::new(); fi.cycles.len()];
    for (f, cyc) in fi.cycles.iter().enumerate() {
        if fi.is_outer(f as u32) {
            continue;
        }
        for &x in cyc {
            if traced[d.label(x).sym() as usize] {
                hits[f].push(x);
            }
        }
        if hits[f].len() > 2 || (hits[f].len() == 1 && !extended) {
            return Err(Error::Hypothesis(format!(
                "cell {f} reads {}",
                d.presentation().alphabet().format_letters(&d.word_of(cyc))
            )));
        }
    }
    let mut t = Tracer { d, fi, traced, hits, seen: vec![false; d.edge_count()] };
    let kind = if extended { CorridorKind::Extended } else { CorridorKind::Plain };
    let mut corridors = Vec::new();
    // corridor starts in increasing dart order: outer darts and darts of terminal cells
    for x in 0..d.dart_count() as Dart {
        if !t.is_traced(x) || t.seen[(x >> 1) as usize] {
            continue;
        }
        let f = t.fi.face_of[x as usize];
        let start = if t.fi.is_outer(f) {
            End::Boundary(x)
        } else if t.hits[f as usize].len() == 1 {
            End::Cell(f, x)
        } else {
            continue;
        };
        let mut c = Corridor {
            cells: Vec::new(),
            edges: vec![x >> 1],
            entry: Vec::new(),
            exit: Vec::new(),
            ends: [start, start],
            left: Vec::new(),
            right: Vec::new(),
            kind,
        };
        t.seen[(x >> 1) as usize] = true;
        let mut cur = x;
        loop {
            match t.cross(cur) {
                Step::Stop(e) => {
                    c.ends[1] = e;
                    break;
                }
                Step::Cell(f, a, b) => {
                    c.cells.push(f);
                    c.entry.push(a);
                    c.exit.push(b);
                    if t.seen[(b >> 1) as usize] {
                        return Err(Error::InvalidDiagram(format!("corridor revisits edge {}", b >> 1)));
                    }
                    t.seen[(b >> 1) as usize] = true;
                    c.edges.push(b >> 1);
                    cur = b;
                }
            }
        }
        let (l, r) = side_darts(d, &c.entry, &c.exit);
        c.left = l;
        c.right = r;
        corridors.push(c);
    }
    let mut rings = Vec::new();
    for e in 0..d.edge_count() as u32 {
        if t.seen[e as usize] || !t.is_traced(2 * e) {
            continue;
        }
        let mut ring = Ring { cells: Vec::new(), edges: vec![e], entry: Vec::new(), exit: Vec::new(), inside: Vec::new(), outside: Vec::new() };
        t.seen[e as usize] = true;
        let mut cur = 2 * e;
        loop {
            match t.cross(cur) {
                Step::Stop(_) => return Err(Error::InvalidDiagram("ring reached an end".into())),
                Step::Cell(f, a, b) => {
                    ring.cells.push(f);
                    ring.entry.push(a);
                    ring.exit.push(b);
                    if b >> 1 == e {
                        break;
                    }
                    if t.seen[(b >> 1) as usize] {
                        return Err(Error::InvalidDiagram(format!("ring revisits edge {}", b >> 1)));
                    }
                    t.seen[(b >> 1) as usize] = true;
                    ring.edges.push(b >> 1);
                    cur = b;
                }
            }
        }
        orient_ring(d, &t.fi, &mut ring);
        rings.push(ring);
    }
    Ok(CorridorReport { letters: letters.to_vec(), corridors, rings })
}

/// Orients a ring so that its left side faces the region it encloses.
fn orient_ring(d: &Diagram, fi: &FaceIndex, ring: &mut Ring) {
    let nf = fi.cycles.len();
    let mut blocked = vec![false; nf];
    for &c in &ring.cells {
        blocked[c as usize] = true;
    }
    let mut outside = vec![false; nf];
    if let Some(o) = fi.outer {
        let mut q = VecDeque::from([o]);
        outside[o as usize] = true;
        while let Some(f) = q.pop_front() {
            for &x in &fi.cycles[f as usize] {
                let g = fi.face_of[opp(x) as usize];
                if !blocked[g as usize] && !outside[g as usize] {
                    outside[g as usize] = true;
                    q.push_back(g);
                }
            }
        }
    }
    let (l, r) = side_darts(d, &ring.entry, &ring.exit);
    // left darts belong to ring cells; the face beyond each is opp's face
    let left_out = l.iter().any(|&x| outside[fi.face_of[opp(x) as usize] as usize]);
    let right_out = r.iter().any(|&x| outside[fi.face_of[x as usize] as usize]);
    if left_out && !right_out {
        ring.cells.reverse();
        let entry: Vec<Dart> = ring.exit.iter().rev().copied().collect();
        let exit: Vec<Dart> = ring.entry.iter().rev().copied().collect();
        ring.entry = entry;
        ring.exit = exit;
        ring.edges.rotate_left(1);
        ring.edges.reverse();
        let (l, r) = side_darts(d, &ring.entry, &ring.exit);
        ring.inside = l;
        ring.outside = r;
    } else {
        ring.inside = l;
        ring.outside = r;
    }
}

impl CorridorReport {
    pub fn traced_edge_count(d: &Diagram, letters: &[u32]) -> usize {
        (0..d.edge_count() as u32).filter(|&e| letters.contains(&d.edge(e).2.sym())).count()
    }

    /// Each traced edge lies in exactly one corridor or ring and cells are not shared.
    pub fn check_partition(&self, d: &Diagram) -> Result<()> {
        let mut count = vec![0u32; d.edge_count()];
        let mut cells = vec![0u32; d.faces().cycles.len()];
        for (edges, cs) in self
            .corridors
            .iter()
            .map(|c| (&c.edges, &c.cells))
            .chain(self.rings.iter().map(|r| (&r.edges, &r.cells)))
        {
            for &e in edges {
                count[e as usize] += 1;
            }
            for &c in cs {
                cells[c as usize] += 1;
            }
        }
        for e in 0..d.edge_count() {
            let want = u32::from(self.letters.contains(&d.edge(e as u32).2.sym()));
            if count[e] != want {
                return Err(Error::InvalidDiagram(format!("edge {e} covered {} times", count[e])));
            }
        }
        if let Some(c) = cells.iter().position(|&n| n > 1) {
            return Err(Error::InvalidDiagram(format!("cell {c} lies in two corridors")));
        }
        Ok(())
    }

    pub fn to_text(&self, d: &Diagram) -> String {
        let a = d.presentation().alphabet();
        let word = |ds: &[Dart]| {
            let w = d.word_of(ds);
            if w.is_empty() {
                "1".to_string()
            } else {
                a.format_letters(&w)
            }
        };
        let end = |e: &End| match e {
            End::Boundary(x) => format!("boundary {}", dart_name(*x)),
            End::Cell(f, x) => format!("cell {f} {}", dart_name(*x)),
        };
        let mut s = String::new();
        let names: Vec<&str> = self.letters.iter().map(|&x| a.name(x)).collect();
        s.push_str(&format!("letters {}\n", names.join(",")));
        for (i, c) in self.corridors.iter().enumerate() {
            s.push_str(&format!(
                "corridor {i} length {} ends [{}] [{}]\n  cells {:?}\n  left {}\n  right {}\n",
                c.len(),
                end(&c.ends[0]),
                end(&c.ends[1]),
                c.cells,
                word(&c.left),
                word(&c.right)
            ));
        }
        for (i, r) in self.rings.iter().enumerate() {
            s.push_str(&format!(
                "ring {i} length {}\n  cells {:?}\n  inside {}\n  outside {}\n",
                r.cells.len(),
                r.cells,
                word(&r.inside),
                word(&r.outside)
            ));
        }
        s
    }

    /// Rows of `kind,index,length,cells,left,right`.
    pub fn csv_rows(&self, d: &Diagram) -> Vec<Vec<String>> {
        let a = d.presentation().alphabet();
        let word = |ds: &[Dart]| a.format_letters(&d.word_of(ds));
        let join = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let mut rows = Vec::new();
        for (i, c) in self.corridors.iter().enumerate() {
            rows.push(vec!["corridor".into(), i.to_string(), c.len().to_string(), join(&c.cells), word(&c.left), word(&c.right)]);
        }
        for (i, r) in self.rings.iter().enumerate() {
            rows.push(vec!["ring".into(), i.to_string(), r.cells.len().to_string(), join(&r.cells), word(&r.inside), word(&r.outside)]);
        }
        rows
    }
}

fn pk_k(d: &Diagram, what: &str) -> Result<usize> {
    match d.presentation().family() {
        Family::Pk { k } => Ok(*k),
        other => Err(Error::WrongFamily(format!("{what} needs a Pk diagram, got {other}"))),
    }
}

/// `s_k t`-corridors, which may also end on cells carrying one `s_k` letter.
pub fn extended_skt_corridors(d: &Diagram) -> Result<CorridorReport> {
    let k = pk_k(d, "extended s_k t corridors")?;
    let p = d.presentation();
    let letters = vec![p.sym(&format!("s{k}"))?, p.sym("t")?];
    trace_corridors(d, &letters, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    Up,
    Down,
    LastUp,
    Returning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalTag {
    pub corridor: usize,
    /// position in the `t`-arc of the end that determined the tag
    pub position: usize,
    pub tag: Tag,
}

/// Tags the corridors that meet the `t`-arc made of the first `w_len` boundary darts.
///
/// A step of the arc is up when its sign agrees with the sign of the total exponent.
/// The up-step into level `j >= 1` after which the running height never drops below `j`
/// is last-up, so there are exactly `|h_t(w)|` of them. A corridor with both ends on the
/// arc and no last-up end is returning.
pub fn classify_horizontal(d: &Diagram, report: &CorridorReport, w_len: usize) -> Result<Vec<HorizontalTag>> {
    let bd = d.boundary_darts();
    if w_len > bd.len() {
        return Err(Error::Param(format!("t-arc length {w_len} exceeds the boundary length {}", bd.len())));
    }
    let t = d.presentation().sym("t")?;
    let letters: Vec<Letter> = d.word_of(&bd[..w_len]);
    if let Some(l) = letters.iter().find(|l| l.sym() != t) {
        return Err(Error::Param(format!(
            "t-arc contains {}",
            d.presentation().alphabet().format_letters(&[*l])
        )));
    }
    let h: i64 = letters.iter().map(|l| l.sign()).sum();
    let dir = if h < 0 { -1 } else { 1 };
    let heights: Vec<i64> = letters
        .iter()
        .scan(0i64, |acc, l| {
            *acc += l.sign() * dir;
            Some(*acc)
        })
        .collect();
    let n = heights.len();
    let mut suffix_min = vec![i64::MAX; n + 1];
    for i in (0..n).rev() {
        suffix_min[i] = suffix_min[i + 1].min(heights[i]);
    }
    let step_tag = |i: usize| -> Tag {
        if letters[i].sign() * dir > 0 {
            let j = heights[i];
            if j >= 1 && suffix_min[i + 1].min(j) >= j {
                Tag::LastUp
            } else {
                Tag::Up
            }
        } else {
            Tag::Down
        }
    };
    let pos_of = |x: Dart| bd[..w_len].iter().position(|&b| b == x);
    let mut out = Vec::new();
    for (ci, c) in report.corridors.iter().enumerate() {
        let ps: Vec<usize> = c
            .ends
            .iter()
            .filter_map(|e| match e {
                End::Boundary(x) => pos_of(*x),
                End::Cell(..) => None,
            })
            .collect();
        if ps.is_empty() {
            continue;
        }
        let last_up = ps.iter().copied().find(|&p| step_tag(p) == Tag::LastUp);
        let (position, tag) = match last_up {
            Some(p) => (p, Tag::LastUp),
            None if ps.len() == 2 && ps[0] != ps[1] => (ps[0].min(ps[1]), Tag::Returning),
            None => (ps[0], step_tag(ps[0])),
        };
        out.push(HorizontalTag { corridor: ci, position, tag });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub first: (String, usize),
    pub second: (String, usize),
    pub shared: Vec<u32>,
}

/// Pairs of corridors or rings, from different letter families, sharing at least two cells.
pub fn crossing_report(d: &Diagram) -> Result<Vec<Crossing>> {
    let k = match d.presentation().family() {
        Family::HatPk { k } => *k,
        other => return Err(Error::WrongFamily(format!("crossing report needs a hat Pk diagram, got {other}"))),
    };
    let p = d.presentation();
    let mut families: Vec<(String, Vec<u32>)> = Vec::new();
    for i in 1..k {
        families.push((format!("s{i}"), vec![p.sym(&format!("s{i}"))?]));
    }
    families.push((format!("s{k}t"), vec![p.sym(&format!("s{k}"))?, p.sym("t")?]));
    for i in 1..=k {
        families.push((format!("hs{i}"), vec![p.sym(&format!("hs{i}"))?]));
    }
    let mut chains: Vec<(String, usize, Vec<u32>)> = Vec::new();
    for (name, letters) in &families {
        let rep = trace_corridors(d, letters, false)?;
        let n = rep.corridors.len();
        for (i, c) in rep.corridors.iter().enumerate() {
            chains.push((name.clone(), i, c.cells.clone()));
        }
        for (i, r) in rep.rings.iter().enumerate() {
            chains.push((name.clone(), n + i, r.cells.clone()));
        }
    }
    let mut out = Vec::new();
    for i in 0..chains.len() {
        for j in i + 1..chains.len() {
            if chains[i].0 == chains[j].0 {
                continue;
            }
            let shared: Vec<u32> = chains[i].2.iter().copied().filter(|c| chains[j].2.contains(c)).collect();
            if shared.len() >= 2 {
                out.push(Crossing {
                    first: (chains[i].0.clone(), chains[i].1),
                    second: (chains[j].0.clone(), chains[j].1),
                    shared,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{bpower_stack, delta_m_diagram, dn_diagram};
    use crate::diagram::Surface;
    use crate::presentation::{build_presentation, Presentation};
    use std::sync::Arc;

    fn square() -> Diagram {
        let p = Arc::new(Presentation::custom("At", &["a", "t"], &["a^-1 t^-1 a t"]).unwrap());
        Surface::polygon(p.clone(), p.relators()[0].letters()).finish().unwrap().0
    }

    #[test]
    fn no_traced_edges() {
        let d = square();
        let a = d.presentation().sym("a").unwrap();
        let p = Arc::new(Presentation::custom("At", &["a", "t"], &["a^-1 t^-1 a t"]).unwrap());
        let single = Diagram::single_vertex(p);
        let r = trace_corridors(&single, &[a], false).unwrap();
        assert!(r.corridors.is_empty() && r.rings.is_empty());
    }

    #[test]
    fn square_has_one_corridor() {
        let d = square();
        let t = d.presentation().sym("t").unwrap();
        let r = trace_corridors(&d, &[t], false).unwrap();
        assert_eq!(r.corridors.len(), 1);
        assert_eq!(r.corridors[0].len(), 1);
        assert_eq!(d.word_of(&r.corridors[0].left).len() + d.word_of(&r.corridors[0].right).len(), 2);
        r.check_partition(&d).unwrap();
    }

    #[test]
    fn hypothesis_names_relator() {
        let p = Arc::new(build_presentation(&Family::Pk { k: 2 }).unwrap());
        let d = Diagram::single_vertex(p.clone());
        let err = trace_corridors(&d, &[p.sym("s2").unwrap(), p.sym("t").unwrap()], false).unwrap_err();
        assert!(err.to_string().contains("f^-1 s1 f s2^-1 s1^-1"), "{err}");
    }

    #[test]
    fn dn_f_corridors() {
        for n in 1..=4 {
            let b = dn_diagram(2, n).unwrap();
            let f = b.diagram.presentation().sym("f").unwrap();
            let r = trace_corridors(&b.diagram, &[f], false).unwrap();
            assert_eq!(r.corridors.len(), n);
            assert!(r.rings.is_empty());
            r.check_partition(&b.diagram).unwrap();
        }
    }

    #[test]
    fn dn_extended_ends_on_f_cells() {
        let b = dn_diagram(2, 3).unwrap();
        let pk = Arc::new(build_presentation(&Family::Pk { k: 2 }).unwrap());
        let d = b.diagram.transfer(pk).unwrap();
        let r = extended_skt_corridors(&d).unwrap();
        r.check_partition(&d).unwrap();
        assert!(r.corridors.iter().any(|c| matches!(c.ends[0], End::Cell(..))));
    }

    #[test]
    fn bpower_rows_triple() {
        let b = bpower_stack(2, 2, false).unwrap();
        let r = extended_skt_corridors(&b.diagram).unwrap();
        assert_eq!(r.corridors.len(), 2);
        let bsym = b.diagram.presentation().sym("b").unwrap();
        let mut hb: Vec<(i64, i64)> = Vec::new();
        for c in &r.corridors {
            let h = |ds: &[Dart]| b.diagram.word_of(ds).iter().map(|l| {
                assert_eq!(l.sym(), bsym);
                l.sign()
            }).sum::<i64>().abs();
            hb.push((h(&c.left), h(&c.right)));
        }
        for (l, r) in hb {
            assert!(l == 3 * r || r == 3 * l, "{l} {r}");
        }
    }

    #[test]
    fn delta_left_stack_and_last_up() {
        let m = 3;
        let b = delta_m_diagram(2, m).unwrap();
        let r = extended_skt_corridors(&b.diagram).unwrap();
        r.check_partition(&b.diagram).unwrap();
        let t = b.diagram.presentation().sym("t").unwrap();
        let through_t = r.corridors.iter().filter(|c| c.edges.iter().any(|&e| b.diagram.edge(e).2.sym() == t)).count();
        assert_eq!(through_t, m);
        let tags = classify_horizontal(&b.diagram, &r, m).unwrap();
        assert_eq!(tags.len(), m);
        assert!(tags.iter().all(|t| t.tag == Tag::LastUp));
    }

    #[test]
    fn cancelling_pair_has_no_last_up() {
        let p = Arc::new(build_presentation(&Family::Pk { k: 2 }).unwrap());
        let t = Letter::pos(p.sym("t").unwrap());
        let d = Surface::path(p, &[t]).finish().unwrap().0;
        let r = extended_skt_corridors(&d).unwrap();
        assert_eq!(r.corridors.len(), 1);
        let tags = classify_horizontal(&d, &r, 2).unwrap();
        assert_eq!(tags.len(), 1);
        assert_eq!(tags[0].tag, Tag::Returning);
    }

    #[test]
    fn double_crossing_found() {
        let p = Arc::new(build_presentation(&Family::HatPk { k: 2 }).unwrap());
        let (s1, s2) = (Letter::pos(p.sym("s1").unwrap()), Letter::pos(p.sym("s2").unwrap()));
        let mut s = Surface::path(p.clone(), &[s2, s1]);
        let w = s.outer_walk();
        let v = s.cell(&w[0..2], &[s1, s2]).unwrap();
        s.cell(&v, &[s2, s1]).unwrap();
        let d = s.finish().unwrap().0;
        assert!(d.is_valid(), "{}", d.validate());
        let rep = crossing_report(&d).unwrap();
        assert_eq!(rep.len(), 1);
        assert_eq!(rep[0].shared.len(), 2);
        assert!(crossing_report(&Diagram::single_vertex(p)).unwrap().is_empty());
    }
}
