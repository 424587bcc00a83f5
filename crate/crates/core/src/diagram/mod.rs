//! Planar combinatorial maps carrying van Kampen diagrams.

pub mod format;
pub mod ops;
pub mod surface;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{Letter, Word};

pub use ops::{
    collapse_islands, diamond_move, excise_and_glue, fold, identify_edges, lollipop, project,
    project_with, IslandTrace, Scheme,
};
pub use surface::{opp, Dart, Keep, Pinch, Surface};

/// `+e` for the forward dart of edge `e`, `-e` for its opposite.
pub fn dart_name(d: Dart) -> String {
    if d & 1 == 0 {
        format!("+{}", d >> 1)
    } else {
        format!("-{}", d >> 1)
    }
}

pub fn parse_dart(s: &str) -> Result<Dart> {
    let (sign, rest) = s.split_at(1);
    let e: u32 = rest.parse().map_err(|_| Error::Parse(format!("bad signed edge id {s}")))?;
    match sign {
        "+" => Ok(2 * e),
        "-" => Ok(2 * e + 1),
        _ => Err(Error::Parse(format!("bad signed edge id {s}"))),
    }
}

#[derive(Clone, Debug)]
pub struct Diagram {
    pres: Arc<Presentation>,
    n_vertices: u32,
    from: Vec<u32>,
    to: Vec<u32>,
    labels: Vec<Letter>,
    rot: Vec<Vec<Dart>>,
    next: Vec<Dart>,
    base: u32,
    outer: Option<Dart>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.pres.to_text() == other.pres.to_text()
            && self.n_vertices == other.n_vertices
            && self.from == other.from
            && self.to == other.to
            && self.labels == other.labels
            && self.rot == other.rot
            && self.base == other.base
            && self.outer == other.outer
    }
}

/// Face cycles of a diagram; ids are assigned in order of each cycle's least dart.
#[derive(Clone, Debug)]
pub struct FaceIndex {
    pub face_of: Vec<u32>,
    pub cycles: Vec<Vec<Dart>>,
    pub outer: Option<u32>,
}

impl FaceIndex {
    pub fn inner(&self) -> impl Iterator<Item = (u32, &Vec<Dart>)> + '_ {
        self.cycles
            .iter()
            .enumerate()
            .filter(move |(i, _)| Some(*i as u32) != self.outer)
            .map(|(i, c)| (i as u32, c))
    }

    pub fn is_outer(&self, face: u32) -> bool {
        self.outer == Some(face)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Structure,
    Disconnected,
    Euler,
    OuterFace,
    NotRelator,
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
    pub darts: Vec<Dart>,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: ViolationKind, message: String, darts: Vec<Dart>) {
        self.violations.push(Violation { kind, message, darts });
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::InvalidDiagram(self.to_string()))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{:?}: {}", v.kind, v.message)?;
            if !v.darts.is_empty() {
                let names: Vec<String> = v.darts.iter().take(16).map(|&d| dart_name(d)).collect();
                write!(f, " [{}{}]", names.join(" "), if v.darts.len() > 16 { " ..." } else { "" })?;
            }
        }
        Ok(())
    }
}

/// Breadth-first tree from the base: distance, parent dart into each vertex, visit order.
#[derive(Clone, Debug)]
pub struct BfsTree {
    pub dist: Vec<u32>,
    pub parent: Vec<Option<Dart>>,
    pub order: Vec<u32>,
}

impl Diagram {
    pub fn single_vertex(pres: Arc<Presentation>) -> Self {
        Diagram {
            pres,
            n_vertices: 1,
            from: Vec::new(),
            to: Vec::new(),
            labels: Vec::new(),
            rot: vec![Vec::new()],
            next: Vec::new(),
            base: 0,
            outer: None,
        }
    }

    /// Assembles a diagram from explicit parts, checking only combinatorial consistency.
    pub fn from_parts(
        pres: Arc<Presentation>,
        n_vertices: u32,
        edges: Vec<(u32, u32, Letter)>,
        rot: Vec<Vec<Dart>>,
        base: u32,
        outer: Option<Dart>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        if n_vertices == 0 {
            return bad("a diagram needs at least one vertex".into());
        }
        if rot.len() != n_vertices as usize {
            return bad(format!("{} rotation lists for {} vertices", rot.len(), n_vertices));
        }
        let alpha = pres.alphabet().len() as u32;
        let ne = edges.len();
        let mut from = Vec::with_capacity(ne);
        let mut to = Vec::with_capacity(ne);
        let mut labels = Vec::with_capacity(ne);
        for (i, &(a, b, l)) in edges.iter().enumerate() {
            if a >= n_vertices || b >= n_vertices {
                return bad(format!("edge {i} has an endpoint out of range"));
            }
            if l.is_inverse() || l.sym() >= alpha {
                return bad(format!("edge {i} must carry a positive generator label"));
            }
            from.push(a);
            to.push(b);
            labels.push(l);
        }
        let nd = 2 * ne;
        let mut next = vec![u32::MAX; nd];
        let mut seen = vec![false; nd];
        for (v, list) in rot.iter().enumerate() {
            for (i, &d) in list.iter().enumerate() {
                if d as usize >= nd {
                    return bad(format!("rotation of vertex {v} names unknown dart {}", dart_name(d)));
                }
                if seen[d as usize] {
                    return bad(format!("dart {} appears twice in the rotation system", dart_name(d)));
                }
                seen[d as usize] = true;
                let tail = if d & 1 == 0 { from[(d >> 1) as usize] } else { to[(d >> 1) as usize] };
                if tail as usize != v {
                    return bad(format!("dart {} listed at vertex {v} but starts at {tail}", dart_name(d)));
                }
                next[d as usize] = list[(i + 1) % list.len()];
            }
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return bad(format!("dart {} missing from the rotation system", dart_name(d as Dart)));
        }
        if base >= n_vertices {
            return bad("base vertex out of range".into());
        }
        match outer {
            None if ne > 0 => return bad("a diagram with edges needs an outer dart".into()),
            Some(_) if ne == 0 => return bad("outer dart given for an edgeless diagram".into()),
            Some(o) if o as usize >= nd => return bad("outer dart out of range".into()),
            _ => {}
        }
        let d = Diagram { pres, n_vertices, from, to, labels, rot, next, base, outer };
        if let Some(o) = outer {
            if d.tail(o) != base {
                return bad(format!("outer dart {} does not start at the base", dart_name(o)));
            }
        }
        Ok(d)
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn vertex_count(&self) -> usize {
        self.n_vertices as usize
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    pub fn dart_count(&self) -> usize {
        2 * self.labels.len()
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn outer(&self) -> Option<Dart> {
        self.outer
    }

    pub fn edge(&self, e: u32) -> (u32, u32, Letter) {
        let e = e as usize;
        (self.from[e], self.to[e], self.labels[e])
    }

    pub fn rotation(&self, v: u32) -> &[Dart] {
        &self.rot[v as usize]
    }

    pub fn label(&self, d: Dart) -> Letter {
        let l = self.labels[(d >> 1) as usize];
        if d & 1 == 0 {
            l
        } else {
            l.inverse()
        }
    }

    pub fn tail(&self, d: Dart) -> u32 {
        let e = (d >> 1) as usize;
        if d & 1 == 0 {
            self.from[e]
        } else {
            self.to[e]
        }
    }

    pub fn head(&self, d: Dart) -> u32 {
        self.tail(opp(d))
    }

    /// Rotation successor (anticlockwise) at the tail of `d`.
    pub fn next(&self, d: Dart) -> Dart {
        self.next[d as usize]
    }

    /// Face successor: the dart after `d` around the face on its right.
    pub fn sigma(&self, d: Dart) -> Dart {
        self.next[opp(d) as usize]
    }

    pub fn word_of(&self, darts: &[Dart]) -> Vec<Letter> {
        darts.iter().map(|&d| self.label(d)).collect()
    }

    pub fn faces(&self) -> FaceIndex {
        let nd = self.dart_count();
        let mut face_of = vec![u32::MAX; nd];
        let mut cycles = Vec::new();
        for d in 0..nd as u32 {
            if face_of[d as usize] != u32::MAX {
                continue;
            }
            let id = cycles.len() as u32;
            let mut cyc = vec![d];
            face_of[d as usize] = id;
            let mut x = self.sigma(d);
            while x != d {
                face_of[x as usize] = id;
                cyc.push(x);
                x = self.sigma(x);
            }
            cycles.push(cyc);
        }
        let outer = self.outer.map(|o| face_of[o as usize]);
        FaceIndex { face_of, cycles, outer }
    }

    /// Number of inner faces.
    pub fn area(&self) -> usize {
        let f = self.faces();
        f.cycles.len() - usize::from(f.outer.is_some())
    }

    pub fn boundary_darts(&self) -> Vec<Dart> {
        let Some(o) = self.outer else { return Vec::new() };
        let mut out = vec![o];
        let mut x = self.sigma(o);
        while x != o {
            out.push(x);
            x = self.sigma(x);
        }
        out
    }

    /// The word read anticlockwise around the outer face from the base.
    pub fn boundary_word(&self) -> Word {
        Word::from_raw(self.pres.alphabet().clone(), self.word_of(&self.boundary_darts()))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let nv = self.n_vertices as usize;
        let ne = self.edge_count();
        let faces = self.faces();
        // connectivity
        let tree = self.bfs_tree();
        let unreached: Vec<u32> = (0..nv as u32).filter(|&v| tree.dist[v as usize] == u32::MAX).collect();
        if !unreached.is_empty() {
            rep.push(
                ViolationKind::Disconnected,
                format!("{} vertices unreachable from the base (first: {})", unreached.len(), unreached[0]),
                Vec::new(),
            );
        }
        let nf = faces.cycles.len() + usize::from(ne == 0);
        let chi = nv as i64 - ne as i64 + nf as i64;
        if chi != 2 {
            rep.push(
                ViolationKind::Euler,
                format!("V - E + F = {nv} - {ne} + {nf} = {chi}, expected 2"),
                Vec::new(),
            );
        }
        if let Some(o) = self.outer {
            if self.tail(o) != self.base {
                rep.push(ViolationKind::OuterFace, "outer dart does not start at the base".into(), vec![o]);
            }
        } else if ne > 0 {
            rep.push(ViolationKind::OuterFace, "no outer face designated".into(), Vec::new());
        }
        let alphabet = self.pres.alphabet();
        for (id, cyc) in faces.inner() {
            let w = self.word_of(cyc);
            if w.len() == 2 && w[0] == w[1].inverse() {
                rep.push(
                    ViolationKind::Degenerate,
                    format!("face {id} reads {}, a folded pair", alphabet.format_letters(&w)),
                    cyc.clone(),
                );
            } else if !self.pres.is_relator_conjugate(&w) {
                rep.push(
                    ViolationKind::NotRelator,
                    format!("face {id} reads {}, not a relator conjugate", alphabet.format_letters(&w)),
                    cyc.clone(),
                );
            }
        }
        rep
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    pub fn bfs_tree(&self) -> BfsTree {
        let nv = self.n_vertices as usize;
        let mut dist = vec![u32::MAX; nv];
        let mut parent = vec![None; nv];
        let mut order = Vec::with_capacity(nv);
        let mut q = VecDeque::new();
        dist[self.base as usize] = 0;
        q.push_back(self.base);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for &d in &self.rot[v as usize] {
                let h = self.head(d) as usize;
                if dist[h] == u32::MAX {
                    dist[h] = dist[v as usize] + 1;
                    parent[h] = Some(d);
                    q.push_back(h as u32);
                }
            }
        }
        BfsTree { dist, parent, order }
    }

    /// Graph distances from a set of source vertices.
    pub fn distances_from(&self, sources: &[u32]) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n_vertices as usize];
        let mut q = VecDeque::new();
        for &s in sources {
            if dist[s as usize] == u32::MAX {
                dist[s as usize] = 0;
                q.push_back(s);
            }
        }
        while let Some(v) = q.pop_front() {
            for &d in &self.rot[v as usize] {
                let h = self.head(d) as usize;
                if dist[h] == u32::MAX {
                    dist[h] = dist[v as usize] + 1;
                    q.push_back(h as u32);
                }
            }
        }
        dist
    }

    /// Intrinsic diameter with a witness vertex (the first of maximal distance in BFS order).
    pub fn idiam_with_witness(&self) -> (u32, u32) {
        let t = self.bfs_tree();
        let mut best = (0, self.base);
        for &v in &t.order {
            if t.dist[v as usize] > best.0 {
                best = (t.dist[v as usize], v);
            }
        }
        best
    }

    pub fn idiam(&self) -> u32 {
        self.idiam_with_witness().0
    }

    /// All-pairs diameter of the 1-skeleton; a secondary statistic.
    pub fn graph_diameter(&self) -> u32 {
        (0..self.n_vertices)
            .map(|v| self.distances_from(&[v]).into_iter().filter(|&d| d != u32::MAX).max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Word along the breadth-first tree path from the base to `v`.
    pub fn path_word(&self, v: u32) -> Vec<Letter> {
        let t = self.bfs_tree();
        let mut out = Vec::new();
        let mut x = v;
        while let Some(d) = t.parent[x as usize] {
            out.push(self.label(d));
            x = self.tail(d);
        }
        out.reverse();
        out
    }

    pub fn to_surface(&self) -> Surface {
        let nd = self.dart_count();
        let label: Vec<Letter> = (0..nd as u32).map(|d| self.label(d)).collect();
        let tail: Vec<u32> = (0..nd as u32).map(|d| self.tail(d)).collect();
        let sigma: Vec<Dart> = (0..nd as u32).map(|d| self.sigma(d)).collect();
        Surface::from_raw(self.pres.clone(), label, tail, sigma, self.n_vertices as usize, self.base, self.outer)
    }

    /// Canonical renumbering (breadth-first from the outer dart).
    pub fn canonical(&self) -> Result<Diagram> {
        Ok(self.to_surface().finish()?.0)
    }

    /// Same map over another presentation, matching generators by name.
    pub fn transfer(&self, target: Arc<Presentation>) -> Result<Diagram> {
        let src = self.pres.alphabet();
        let tgt = target.alphabet();
        let mut labels = Vec::with_capacity(self.labels.len());
        for l in &self.labels {
            let name = src.name(l.sym());
            let s = tgt
                .index(name)
                .ok_or_else(|| Error::AlphabetMismatch(format!("generator {name} missing from target")))?;
            labels.push(Letter::pos(s));
        }
        let mut d = self.clone();
        d.pres = target;
        d.labels = labels;
        Ok(d)
    }

    /// Edges whose label lies in `syms`.
    pub fn edges_with(&self, syms: &[u32]) -> Vec<u32> {
        (0..self.labels.len() as u32).filter(|&e| syms.contains(&self.labels[e as usize].sym())).collect()
    }
}

impl Surface {
    /// Canonical diagram plus the map from surface darts to diagram darts.
    pub fn finish(&self) -> Result<(Diagram, Vec<Option<Dart>>)> {
        let n = self.label.len();
        let mut map = vec![None; n];
        let Some(o) = self.outer else {
            if self.live_darts().next().is_some() {
                return Err(Error::InvalidDiagram("live darts but no outer face".into()));
            }
            return Ok((Diagram::single_vertex(self.pres.clone()), map));
        };
        let mut vid = vec![u32::MAX; n];
        let mut starts: Vec<Dart> = Vec::new();
        let mark = |start: Dart, id: u32, vid: &mut Vec<u32>| {
            let mut d = start;
            loop {
                vid[d as usize] = id;
                d = self.next(d);
                if d == start {
                    break;
                }
            }
        };
        mark(o, 0, &mut vid);
        starts.push(o);
        let mut edge_of = vec![u32::MAX; n / 2];
        let mut fwd_darts: Vec<Dart> = Vec::new();
        let mut qi = 0;
        while qi < starts.len() {
            let start = starts[qi];
            let mut d = start;
            loop {
                let e = (d >> 1) as usize;
                if edge_of[e] == u32::MAX {
                    edge_of[e] = fwd_darts.len() as u32;
                    fwd_darts.push(if self.label[d as usize].is_inverse() { opp(d) } else { d });
                }
                let h = opp(d);
                if vid[h as usize] == u32::MAX {
                    let id = starts.len() as u32;
                    mark(h, id, &mut vid);
                    starts.push(h);
                }
                d = self.next(d);
                if d == start {
                    break;
                }
            }
            qi += 1;
        }
        if let Some(d) = self.live_darts().find(|&d| vid[d as usize] == u32::MAX) {
            return Err(Error::InvalidDiagram(format!("dart {d} is not connected to the base")));
        }
        let new_dart = |d: Dart| -> Dart {
            let e = edge_of[(d >> 1) as usize];
            if fwd_darts[e as usize] == d {
                2 * e
            } else {
                2 * e + 1
            }
        };
        for d in self.live_darts() {
            map[d as usize] = Some(new_dart(d));
        }
        let edges: Vec<(u32, u32, Letter)> = fwd_darts
            .iter()
            .map(|&f| (vid[f as usize], vid[opp(f) as usize], self.label[f as usize]))
            .collect();
        let mut rot = Vec::with_capacity(starts.len());
        for &s in &starts {
            let mut list = Vec::new();
            let mut d = s;
            loop {
                list.push(new_dart(d));
                d = self.next(d);
                if d == s {
                    break;
                }
            }
            let m = list.iter().enumerate().min_by_key(|(_, &x)| x).map(|(i, _)| i).unwrap_or(0);
            list.rotate_left(m);
            rot.push(list);
        }
        let diagram = Diagram::from_parts(self.pres.clone(), starts.len() as u32, edges, rot, 0, Some(new_dart(o)))?;
        Ok((diagram, map))
    }
}
