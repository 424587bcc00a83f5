//! Mutable half-edge structure used to build and operate on diagrams.
//!
//! Dart `2e` runs along edge `e`, dart `2e+1` against it.  `sigma[d]` is the dart after `d`
//! around the face on the right of `d`; it equals the rotation successor of `opp(d)` at
//! the head of `d`.  The outer face is the sigma-orbit of `outer`, whose tail is the base.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{invert_letters, Letter};

pub type Dart = u32;

#[inline]
pub fn opp(d: Dart) -> Dart {
    d ^ 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pinch {
    /// Identify anyway and drop the enclosed sphere.
    Discard,
    /// Refuse with a planarity-hazard error.
    Error,
}

#[derive(Clone, Debug)]
pub struct Surface {
    pub(crate) pres: Arc<Presentation>,
    pub(crate) label: Vec<Letter>,
    pub(crate) tail: Vec<u32>,
    pub(crate) sigma: Vec<Dart>,
    pub(crate) sigma_inv: Vec<Dart>,
    pub(crate) alive: Vec<bool>,
    uf: Vec<u32>,
    moved: HashMap<Dart, Dart>,
    pub(crate) base: u32,
    pub(crate) outer: Option<Dart>,
}

impl Surface {
    pub fn single(pres: Arc<Presentation>) -> Self {
        Surface {
            pres,
            label: Vec::new(),
            tail: Vec::new(),
            sigma: Vec::new(),
            sigma_inv: Vec::new(),
            alive: Vec::new(),
            uf: vec![0],
            moved: HashMap::new(),
            base: 0,
            outer: None,
        }
    }

    pub(crate) fn from_raw(
        pres: Arc<Presentation>,
        label: Vec<Letter>,
        tail: Vec<u32>,
        sigma: Vec<Dart>,
        n_vertices: usize,
        base: u32,
        outer: Option<Dart>,
    ) -> Self {
        let mut sigma_inv = vec![0; sigma.len()];
        for (d, &s) in sigma.iter().enumerate() {
            sigma_inv[s as usize] = d as Dart;
        }
        let n = label.len();
        Surface {
            pres,
            label,
            tail,
            sigma,
            sigma_inv,
            alive: vec![true; n],
            uf: (0..n_vertices as u32).collect(),
            moved: HashMap::new(),
            base,
            outer,
        }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    /// Boundary polygon reading `word` anticlockwise from the base.
    pub fn polygon(pres: Arc<Presentation>, word: &[Letter]) -> Self {
        let mut s = Surface::single(pres);
        if word.is_empty() {
            return s;
        }
        let n = word.len();
        let verts: Vec<u32> = std::iter::once(0).chain((1..n).map(|_| s.new_vertex())).collect();
        let darts: Vec<Dart> = (0..n).map(|i| s.add_edge(verts[i], verts[(i + 1) % n], word[i])).collect();
        for i in 0..n {
            s.link(darts[i], darts[(i + 1) % n]);
            s.link(opp(darts[(i + 1) % n]), opp(darts[i]));
        }
        s.outer = Some(darts[0]);
        s
    }

    /// A path reading `word` out from the base and back.
    pub fn path(pres: Arc<Presentation>, word: &[Letter]) -> Self {
        let mut s = Surface::single(pres);
        if word.is_empty() {
            return s;
        }
        let mut prev = 0;
        let mut darts = Vec::with_capacity(word.len());
        for &l in word {
            let v = s.new_vertex();
            darts.push(s.add_edge(prev, v, l));
            prev = v;
        }
        let n = darts.len();
        for i in 0..n - 1 {
            s.link(darts[i], darts[i + 1]);
            s.link(opp(darts[i + 1]), opp(darts[i]));
        }
        s.link(darts[n - 1], opp(darts[n - 1]));
        s.link(opp(darts[0]), darts[0]);
        s.outer = Some(darts[0]);
        s
    }

    pub fn new_vertex(&mut self) -> u32 {
        self.uf.push(self.uf.len() as u32);
        (self.uf.len() - 1) as u32
    }

    fn add_edge(&mut self, from: u32, to: u32, l: Letter) -> Dart {
        let d = self.label.len() as Dart;
        self.label.push(l);
        self.label.push(l.inverse());
        self.tail.push(from);
        self.tail.push(to);
        self.sigma.push(d);
        self.sigma.push(d + 1);
        self.sigma_inv.push(d);
        self.sigma_inv.push(d + 1);
        self.alive.push(true);
        self.alive.push(true);
        d
    }

    #[inline]
    pub(crate) fn link(&mut self, a: Dart, b: Dart) {
        self.sigma[a as usize] = b;
        self.sigma_inv[b as usize] = a;
    }

    pub fn find(&self, mut v: u32) -> u32 {
        while self.uf[v as usize] != v {
            v = self.uf[v as usize];
        }
        v
    }

    fn find_mut(&mut self, v: u32) -> u32 {
        let r = self.find(v);
        let mut x = v;
        while self.uf[x as usize] != r {
            let n = self.uf[x as usize];
            self.uf[x as usize] = r;
            x = n;
        }
        r
    }

    pub(crate) fn union_into(&mut self, child: u32, root: u32) {
        let c = self.find_mut(child);
        let r = self.find_mut(root);
        if c != r {
            self.uf[c as usize] = r;
        }
    }

    pub fn vertex(&self, d: Dart) -> u32 {
        self.find(self.tail[d as usize])
    }

    pub fn head(&self, d: Dart) -> u32 {
        self.vertex(opp(d))
    }

    pub fn label(&self, d: Dart) -> Letter {
        self.label[d as usize]
    }

    pub fn sigma(&self, d: Dart) -> Dart {
        self.sigma[d as usize]
    }

    pub fn sigma_inv(&self, d: Dart) -> Dart {
        self.sigma_inv[d as usize]
    }

    pub fn is_alive(&self, d: Dart) -> bool {
        self.alive[d as usize]
    }

    pub fn outer(&self) -> Option<Dart> {
        self.outer
    }

    pub fn base(&self) -> u32 {
        self.find(self.base)
    }

    pub fn dart_count(&self) -> usize {
        self.label.len()
    }

    /// Rotation successor at the tail of `d`.
    pub fn next(&self, d: Dart) -> Dart {
        self.sigma[opp(d) as usize]
    }

    pub fn walk(&self, start: Dart) -> Vec<Dart> {
        let mut out = vec![start];
        let mut d = self.sigma[start as usize];
        while d != start {
            out.push(d);
            d = self.sigma[d as usize];
        }
        out
    }

    pub fn outer_walk(&self) -> Vec<Dart> {
        self.outer.map(|o| self.walk(o)).unwrap_or_default()
    }

    pub fn word_of(&self, darts: &[Dart]) -> Vec<Letter> {
        darts.iter().map(|&d| self.label[d as usize]).collect()
    }

    pub fn boundary_letters(&self) -> Vec<Letter> {
        self.word_of(&self.outer_walk())
    }

    fn kill_edge(&mut self, d: Dart) {
        self.alive[d as usize] = false;
        self.alive[opp(d) as usize] = false;
    }

    fn kill_all(&mut self) {
        self.alive.iter_mut().for_each(|a| *a = false);
        self.outer = None;
    }

    /// Appends a copy of `other` as a detached component; returns `(dart offset, vertex offset)`.
    pub fn absorb(&mut self, other: &Surface) -> (u32, u32) {
        let doff = self.label.len() as u32;
        let voff = self.uf.len() as u32;
        self.label.extend_from_slice(&other.label);
        self.tail.extend(other.tail.iter().map(|t| t + voff));
        self.sigma.extend(other.sigma.iter().map(|s| s + doff));
        self.sigma_inv.extend(other.sigma_inv.iter().map(|s| s + doff));
        self.alive.extend_from_slice(&other.alive);
        self.uf.extend(other.uf.iter().map(|u| u + voff));
        (doff, voff)
    }

    /// Splices a detached component with outer dart `comp_outer` and base `comp_base`
    /// into the corner just before `b`.
    fn splice(&mut self, b: Option<Dart>, comp_outer: Option<Dart>, comp_base: u32, make_outer: bool) {
        let Some(co) = comp_outer else {
            let root = self.base;
            self.union_into(comp_base, root);
            return;
        };
        match b {
            None => {
                let root = self.base;
                self.union_into(comp_base, root);
                self.outer = Some(co);
            }
            Some(b) => {
                let at = self.vertex(b);
                self.union_into(comp_base, at);
                let a = self.sigma_inv[b as usize];
                let last = self.sigma_inv[co as usize];
                self.link(a, co);
                self.link(last, b);
                if make_outer && self.outer == Some(b) {
                    self.outer = Some(co);
                }
            }
        }
    }

    /// Wedges `other` into the corner before `b` (or at the base of an empty surface).
    /// Returns the dart offset of the copied darts.
    pub fn wedge(&mut self, b: Option<Dart>, other: &Surface, make_outer: bool) -> u32 {
        let (doff, voff) = self.absorb(other);
        let co = other.outer.map(|o| o + doff);
        self.splice(b, co, other.base + voff, make_outer);
        doff
    }

    /// Inserts a spike reading `word` at the corner before `b`; returns its outgoing darts.
    pub fn spike(&mut self, b: Option<Dart>, word: &[Letter], make_outer: bool) -> Vec<Dart> {
        if word.is_empty() {
            return Vec::new();
        }
        let p = Surface::path(self.pres.clone(), word);
        let doff = self.wedge(b, &p, make_outer);
        (0..word.len() as u32).map(|i| doff + 2 * i).collect()
    }

    /// Identifies `d1` with the inverse of `d2 = sigma(d1)`; their labels must cancel.
    pub fn zip(&mut self, d1: Dart, keep: Keep, pinch: Pinch) -> Result<()> {
        let d2 = self.sigma[d1 as usize];
        if d1 == d2 || self.label[d2 as usize] != self.label[d1 as usize].inverse() {
            return Err(Error::Precondition(format!("corner at dart {d1} does not cancel")));
        }
        if self.outer == Some(d2) {
            return Err(Error::Precondition("refusing to fold the base corner".into()));
        }
        if d2 == opp(d1) {
            let a = self.sigma_inv[d1 as usize];
            let b = self.sigma[d2 as usize];
            if a == d2 {
                self.kill_edge(d1);
                if self.outer == Some(d1) {
                    self.outer = None;
                }
                return Ok(());
            }
            if self.outer == Some(d1) {
                self.outer = Some(b);
            }
            self.link(a, b);
            self.kill_edge(d1);
            return Ok(());
        }
        let (gone, stay) = match keep {
            Keep::First => (d2, d1),
            Keep::Second => (d1, d2),
        };
        let og = opp(gone);
        if self.sigma[d2 as usize] == d1 {
            if self.outer == Some(d1) {
                if pinch == Pinch::Error {
                    return Err(Error::PlanarityHazard(format!(
                        "identifying darts {d1} and {d2} closes the diagram into a sphere"
                    )));
                }
                self.kill_all();
                return Ok(());
            }
            self.replace_in_face(og, stay);
            self.kill_edge(gone);
            return Ok(());
        }
        let p = self.vertex(d1);
        let r = self.head(d2);
        let a = self.sigma_inv[d1 as usize];
        let b = self.sigma[d2 as usize];
        if self.outer == Some(d1) {
            self.outer = Some(b);
        }
        self.link(a, b);
        self.replace_in_face(og, stay);
        self.kill_edge(gone);
        if p != r {
            self.union_into(r, p);
        } else {
            // on error the surface is left half-identified; callers discard it
            if pinch == Pinch::Error && self.reachable().iter().zip(&self.alive).any(|(s, a)| *a && !s) {
                return Err(Error::PlanarityHazard(format!(
                    "identifying darts {d1} and {d2} would enclose a subdiagram; \
                     collapse the enclosed subdiagram first"
                )));
            }
            self.discard_unreachable();
        }
        Ok(())
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.label.len()];
        let Some(o) = self.outer else { return seen };
        let mut stack = vec![o];
        seen[o as usize] = true;
        while let Some(x) = stack.pop() {
            for y in [opp(x), self.sigma[x as usize]] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    fn replace_in_face(&mut self, old: Dart, new: Dart) {
        let y = self.sigma_inv[old as usize];
        let z = self.sigma[old as usize];
        if y == old {
            self.link(new, new);
        } else {
            self.link(y, new);
            self.link(new, z);
        }
        if self.outer == Some(old) {
            self.outer = Some(new);
        }
        self.moved.insert(old, new);
    }

    /// Follows darts that were replaced by an identification to their live successor.
    pub fn resolve(&self, mut d: Dart) -> Dart {
        while !self.alive[d as usize] {
            match self.moved.get(&d) {
                Some(&n) => d = n,
                None => break,
            }
        }
        d
    }

    /// Kills every dart not in the component of the outer dart.
    pub(crate) fn discard_unreachable(&mut self) {
        if self.outer.is_none() {
            self.kill_all();
            return;
        }
        let seen = self.reachable();
        for (d, s) in seen.iter().enumerate() {
            if !s {
                self.alive[d] = false;
            }
        }
    }

    /// Glues `other` along the outer arc `arc` (consecutive under sigma). The walk of
    /// `other` must read `v u^-1` where `u` is the arc word; returns the darts of `v`.
    pub fn glue_arc(&mut self, arc: &[Dart], other: &Surface, pinch: Pinch) -> Result<Vec<Dart>> {
        let owalk = other.outer_walk();
        let j = arc.len();
        if owalk.len() < j {
            return Err(Error::Precondition("glued diagram is shorter than the arc".into()));
        }
        let u = self.word_of(arc);
        let tailw = other.word_of(&owalk[owalk.len() - j..]);
        if tailw != invert_letters(&u) {
            return Err(Error::Precondition("glued boundary does not end with the arc inverse".into()));
        }
        for w in arc.windows(2) {
            if self.sigma[w[0] as usize] != w[1] {
                return Err(Error::Precondition("arc darts are not consecutive".into()));
            }
        }
        if j == 0 {
            return Err(Error::Precondition("empty arc".into()));
        }
        let doff = self.wedge(Some(arc[0]), other, true);
        let mapped: Vec<Dart> = owalk.iter().map(|d| d + doff).collect();
        let k = mapped.len();
        for i in 0..j {
            let d1 = self.resolve(mapped[k - 1 - i]);
            self.zip(d1, Keep::Second, pinch)?;
        }
        Ok(mapped[..k - j].to_vec())
    }

    /// Attaches one relator cell along `arc`, replacing it by `v` on the boundary.
    pub fn cell(&mut self, arc: &[Dart], v: &[Letter]) -> Result<Vec<Dart>> {
        let mut w = v.to_vec();
        w.extend(invert_letters(&self.word_of(arc)));
        if !self.pres.is_relator_conjugate(&w) {
            return Err(Error::Precondition(format!(
                "cell {} is not a relator",
                self.pres.alphabet().format_letters(&w)
            )));
        }
        let poly = Surface::polygon(self.pres.clone(), &w);
        self.glue_arc(arc, &poly, Pinch::Error)
    }

    /// Reverses orientation; the boundary word becomes its inverse, base kept.
    pub fn mirror(&mut self) {
        let n = self.label.len();
        let mut sig = vec![0; n];
        for d in 0..n as u32 {
            if self.alive[d as usize] {
                sig[d as usize] = opp(self.sigma_inv[opp(d) as usize]);
            } else {
                sig[d as usize] = d;
            }
        }
        if let Some(o) = self.outer {
            self.outer = Some(opp(self.sigma_inv[o as usize]));
        }
        for d in 0..n {
            let s = sig[d];
            self.sigma[d] = s;
            self.sigma_inv[s as usize] = d as Dart;
        }
    }

    /// Moves the base to the tail of an outer dart.
    pub fn rebase(&mut self, d: Dart) {
        self.outer = Some(d);
        self.base = self.vertex(d);
    }

    pub fn live_darts(&self) -> impl Iterator<Item = Dart> + '_ {
        (0..self.label.len() as u32).filter(|&d| self.alive[d as usize])
    }

    /// Face id of each live dart (dead darts get `u32::MAX`) and the face cycles.
    pub fn faces(&self) -> (Vec<u32>, Vec<Vec<Dart>>) {
        let mut face_of = vec![u32::MAX; self.label.len()];
        let mut faces = Vec::new();
        for d in self.live_darts() {
            if face_of[d as usize] != u32::MAX {
                continue;
            }
            let id = faces.len() as u32;
            let cyc = self.walk(d);
            for &x in &cyc {
                face_of[x as usize] = id;
            }
            faces.push(cyc);
        }
        (face_of, faces)
    }

    pub fn outer_face_id(&self, face_of: &[u32]) -> Option<u32> {
        self.outer.map(|o| face_of[o as usize])
    }

    /// Keeps only the faces in `keep` (and their edges); the rest becomes the outer face.
    pub fn extract(&mut self, keep: &[bool]) -> Result<()> {
        let (face_of, _) = self.faces();
        let inside = |d: Dart| face_of[d as usize] != u32::MAX && keep[face_of[d as usize] as usize];
        let live: Vec<Dart> = self.live_darts().collect();
        let rim: Vec<Dart> = live.iter().copied().filter(|&x| !inside(x) && inside(opp(x))).collect();
        if rim.is_empty() {
            return Err(Error::Precondition("extracted region has no boundary".into()));
        }
        let mut succ = Vec::with_capacity(rim.len());
        for &x in &rim {
            let mut y = self.sigma[x as usize];
            while !inside(opp(y)) {
                y = self.next(y);
            }
            succ.push(y);
        }
        for &d in &live {
            if !inside(d) && !inside(opp(d)) {
                self.alive[d as usize] = false;
            }
        }
        for (x, y) in rim.iter().zip(succ) {
            self.link(*x, y);
        }
        let o = rim[0];
        self.outer = Some(o);
        self.base = self.vertex(o);
        Ok(())
    }

    /// Removes the faces in `remove`, leaving holes; returns one dart per hole cycle.
    pub fn excise(&mut self, remove: &[bool]) -> Vec<Dart> {
        let (face_of, _) = self.faces();
        let inside = |d: Dart| face_of[d as usize] != u32::MAX && remove[face_of[d as usize] as usize];
        let live: Vec<Dart> = self.live_darts().collect();
        let rim: Vec<Dart> = live.iter().copied().filter(|&y| inside(y) && !inside(opp(y))).collect();
        let mut succ = Vec::with_capacity(rim.len());
        for &y in &rim {
            let mut z = self.sigma[y as usize];
            while inside(opp(z)) {
                z = self.sigma[opp(z) as usize];
            }
            succ.push(z);
        }
        for &d in &live {
            if inside(d) && inside(opp(d)) {
                self.alive[d as usize] = false;
            }
        }
        for (y, z) in rim.iter().zip(succ) {
            self.link(*y, z);
        }
        let mut seen = std::collections::HashSet::new();
        let mut holes = Vec::new();
        for &y in &rim {
            if seen.insert(y) {
                for x in self.walk(y) {
                    seen.insert(x);
                }
                holes.push(y);
            }
        }
        holes
    }

    /// Cuts along a simple edge path, opening a hole; returns the first dart of the hole.
    pub fn cut_path(&mut self, path: &[Dart]) -> Result<Dart> {
        let l = path.len();
        if l == 0 {
            return Err(Error::Precondition("empty cut path".into()));
        }
        let mut verts = vec![self.vertex(path[0])];
        for w in path.windows(2) {
            if self.head(w[0]) != self.vertex(w[1]) {
                return Err(Error::Precondition("cut path is not connected".into()));
            }
        }
        for &p in path {
            verts.push(self.head(p));
        }
        let mut sorted = verts.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != verts.len() {
            return Err(Error::Precondition("cut path is not simple".into()));
        }
        // left sectors at interior vertices, before any change
        let mut sectors: Vec<Vec<Dart>> = Vec::new();
        for i in 0..l - 1 {
            let stop = opp(path[i]);
            let mut sec = Vec::new();
            let mut e = self.next(path[i + 1]);
            while e != stop {
                sec.push(e);
                e = self.next(e);
            }
            sectors.push(sec);
        }
        let opps: Vec<Dart> = path.iter().map(|&p| opp(p)).collect();
        let pred: Vec<Dart> = opps.iter().map(|&o| self.sigma_inv[o as usize]).collect();
        let succ: Vec<Dart> = opps.iter().map(|&o| self.sigma[o as usize]).collect();
        let mut newv = vec![verts[0]];
        for _ in 0..l - 1 {
            newv.push(self.new_vertex());
        }
        newv.push(verts[l]);
        let copies: Vec<Dart> =
            (0..l).map(|i| self.add_edge(newv[i], newv[i + 1], self.label[path[i] as usize])).collect();
        let remap = |x: Dart| -> Dart {
            match opps.iter().position(|&o| o == x) {
                Some(j) => opp(copies[j]),
                None => x,
            }
        };
        for i in 0..l {
            let (pi, si) = (remap(pred[i]), remap(succ[i]));
            self.link(pi, opp(copies[i]));
            self.link(opp(copies[i]), si);
        }
        for i in 0..l - 1 {
            self.link(copies[i], copies[i + 1]);
            self.link(opps[i + 1], opps[i]);
        }
        self.link(copies[l - 1], opps[l - 1]);
        self.link(opps[0], copies[0]);
        for (i, sec) in sectors.iter().enumerate() {
            for &d in sec {
                self.tail[d as usize] = newv[i + 1];
            }
        }
        if let Some(j) = self.outer.and_then(|o| opps.iter().position(|&x| x == o)) {
            self.outer = Some(opp(copies[j]));
        }
        if let Some(o) = self.outer {
            self.base = self.vertex(o);
        }
        Ok(copies[0])
    }

    /// Zips the face containing `start` completely. The walk of `rep` must read the
    /// inverse of that face read from `start`.
    pub fn fill_face(&mut self, start: Dart, rep: &Surface, pinch: Pinch) -> Result<()> {
        let hole = self.walk(start);
        let rw = rep.outer_walk();
        if rw.len() != hole.len() {
            return Err(Error::Precondition("replacement boundary length differs from the hole".into()));
        }
        if self.word_of(&hole) != invert_letters(&rep.word_of(&rw)) {
            return Err(Error::Precondition("replacement boundary does not match the hole".into()));
        }
        if hole.is_empty() {
            return Ok(());
        }
        let doff = self.wedge(Some(start), rep, false);
        let mapped: Vec<Dart> = rw.iter().map(|d| d + doff).collect();
        let k = mapped.len();
        for i in 0..k {
            let d1 = self.resolve(mapped[k - 1 - i]);
            if !self.alive[d1 as usize] {
                continue;
            }
            self.zip(d1, Keep::Second, pinch)?;
        }
        Ok(())
    }

    pub fn face_count(&self) -> usize {
        let (_, faces) = self.faces();
        faces.len().saturating_sub(usize::from(self.outer.is_some()))
    }
}
