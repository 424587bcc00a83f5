//! Normal-form models for the groups with a solvable word problem.
//!
//! Semidirect elements are written with the free part on the left: a Theta element
//! `(z, w)` stands for `w * s^z`, a B_m element `(u, w)` for `w * u`.  Multiplying on the
//! right by a stable letter `x` conjugates the normal part by `x`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::presentation::{Family, Presentation};
use crate::word::{reduce_letters, Alphabet, Letter, Word};

/// A k x k integer matrix, row-major, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMatrix {
    k: usize,
    entries: Vec<i64>,
}

impl ActionMatrix {
    pub fn identity(k: usize) -> Self {
        let mut entries = vec![0; k * k];
        for i in 0..k {
            entries[i * k + i] = 1;
        }
        ActionMatrix { k, entries }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let k = rows.len();
        let mut entries = Vec::with_capacity(k * k);
        for r in rows {
            assert_eq!(r.len(), k, "matrix must be square");
            entries.extend_from_slice(r);
        }
        ActionMatrix { k, entries }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.k + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.k + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.k).map(<[i64]>::to_vec).collect()
    }

    pub fn mul(&self, other: &ActionMatrix) -> ActionMatrix {
        let k = self.k;
        let mut out = vec![0i64; k * k];
        for i in 0..k {
            for l in 0..k {
                let a = self.entries[i * k + l];
                if a == 0 {
                    continue;
                }
                for j in 0..k {
                    out[i * k + j] += a * other.entries[l * k + j];
                }
            }
        }
        ActionMatrix { k, entries: out }
    }

    pub fn apply(&self, z: &[i64]) -> Vec<i64> {
        let k = self.k;
        (0..k).map(|i| (0..k).map(|j| self.entries[i * k + j] * z[j]).sum()).collect()
    }

    pub fn is_unipotent_lower(&self) -> bool {
        let k = self.k;
        (0..k).all(|i| (0..k).all(|j| {
            let v = self.get(i, j);
            if i == j {
                v == 1
            } else if j > i {
                v == 0
            } else {
                true
            }
        }))
    }

    /// Exact inverse of a unipotent lower-triangular matrix by forward substitution.
    pub fn inverse_unipotent(&self) -> ActionMatrix {
        assert!(self.is_unipotent_lower());
        let k = self.k;
        let mut inv = ActionMatrix::identity(k);
        for col in 0..k {
            for i in col + 1..k {
                let mut acc = 0;
                for j in col..i {
                    acc += self.get(i, j) * inv.get(j, col);
                }
                inv.set(i, col, -acc);
            }
        }
        inv
    }

    pub fn pow(&self, n: u32) -> ActionMatrix {
        let mut acc = ActionMatrix::identity(self.k);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Ones on the diagonal and the subdiagonal: the action of `f`.
    pub fn subdiagonal_unipotent(k: usize) -> Self {
        let mut m = ActionMatrix::identity(k);
        for i in 1..k {
            m.set(i, i - 1, 1);
        }
        m
    }

    /// Ones on and below the diagonal.
    pub fn lower_triangular_ones(k: usize) -> Self {
        let mut m = ActionMatrix::identity(k);
        for i in 0..k {
            for j in 0..i {
                m.set(i, j, 1);
            }
        }
        m
    }

    /// The action of `g`: like `f` but fixing the last two coordinates.
    pub fn g_action(k: usize) -> Self {
        let mut m = ActionMatrix::identity(k);
        for i in 1..k.saturating_sub(1) {
            m.set(i, i - 1, 1);
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    FreeAbelian(usize),
    Free(usize),
    Theta(usize),
    HatTheta(usize),
    Bm(usize),
    FreeProductZZk(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Coord(usize),
    Stable(usize),
    FreeGen,
    FreeAuto(usize),
    Sigma,
    Central,
    ZFactor,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syllable {
    B(i64),
    V(Vec<i64>),
}

/// Normal form of a group element; letters are over the model's alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Vector(Vec<i64>),
    Free(Vec<Letter>),
    Semi { z: Vec<i64>, w: Vec<Letter> },
    Bm { u: Vec<Letter>, w: Vec<Letter> },
    Alt(Vec<Syllable>),
}

impl GroupElement {
    pub(crate) fn approx_bytes(&self) -> usize {
        let base = std::mem::size_of::<GroupElement>();
        base + match self {
            GroupElement::Vector(z) => z.len() * 8,
            GroupElement::Free(w) => w.len() * 4,
            GroupElement::Semi { z, w } => z.len() * 8 + w.len() * 4,
            GroupElement::Bm { u, w } => (u.len() + w.len()) * 4,
            GroupElement::Alt(s) => s.len() * 40,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupModel {
    kind: ModelKind,
    alphabet: Arc<Alphabet>,
    roles: Vec<Role>,
    actions: Vec<(ActionMatrix, ActionMatrix)>,
    phi_inv: Vec<Vec<Letter>>,
}

fn push_reduced(w: &mut Vec<Letter>, l: Letter) {
    if w.last() == Some(&l.inverse()) {
        w.pop();
    } else {
        w.push(l);
    }
}

impl GroupModel {
    fn make(kind: ModelKind, names: Vec<String>, roles: Vec<Role>) -> Result<Self> {
        let alphabet = Arc::new(Alphabet::new(names)?);
        let mut actions = Vec::new();
        let mut phi_inv = Vec::new();
        match kind {
            ModelKind::Theta(k) | ModelKind::HatTheta(k) => {
                let f = ActionMatrix::subdiagonal_unipotent(k);
                let g = ActionMatrix::g_action(k);
                actions.push((f.clone(), f.inverse_unipotent()));
                actions.push((g.clone(), g.inverse_unipotent()));
            }
            ModelKind::Bm(m) => {
                // phi^-1(a_m) = a_m, phi^-1(a_i) = a_i phi^-1(a_{i+1})^-1
                let mut table: Vec<Vec<Letter>> = vec![Vec::new(); m];
                table[m - 1] = vec![Letter::pos((m - 1) as u32)];
                for i in (0..m - 1).rev() {
                    let mut w = vec![Letter::pos(i as u32)];
                    w.extend(crate::word::invert_letters(&table[i + 1]));
                    table[i] = reduce_letters(&w);
                }
                phi_inv = table;
            }
            _ => {}
        }
        Ok(GroupModel { kind, alphabet, roles, actions, phi_inv })
    }

    pub fn free_abelian(k: usize) -> Result<Self> {
        Self::free_abelian_named(&(1..=k).map(|i| format!("s{i}")).collect::<Vec<_>>())
    }

    pub fn free_abelian_named(names: &[String]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Param("free abelian rank must be positive".into()));
        }
        let roles = (0..names.len()).map(Role::Coord).collect();
        Self::make(ModelKind::FreeAbelian(names.len()), names.to_vec(), roles)
    }

    pub fn free(rank: usize) -> Result<Self> {
        Self::free_named(&(1..=rank).map(|i| format!("x{i}")).collect::<Vec<_>>())
    }

    pub fn free_named(names: &[String]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Param("free rank must be positive".into()));
        }
        let roles = vec![Role::FreeGen; names.len()];
        Self::make(ModelKind::Free(names.len()), names.to_vec(), roles)
    }

    fn theta_like(k: usize, hat: bool) -> Result<Self> {
        if k < 2 {
            return Err(Error::Param("Theta needs k >= 2".into()));
        }
        let p = if hat { "h" } else { "" };
        let mut names: Vec<String> = (1..=k).map(|i| format!("{p}s{i}")).collect();
        names.push(format!("{p}f"));
        names.push(format!("{p}g"));
        let mut roles: Vec<Role> = (0..k).map(Role::Coord).collect();
        roles.push(Role::Stable(0));
        roles.push(Role::Stable(1));
        let kind = if hat { ModelKind::HatTheta(k) } else { ModelKind::Theta(k) };
        Self::make(kind, names, roles)
    }

    pub fn theta(k: usize) -> Result<Self> {
        Self::theta_like(k, false)
    }

    pub fn hat_theta(k: usize) -> Result<Self> {
        Self::theta_like(k, true)
    }

    pub fn bm(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::Param("B_m needs m >= 1".into()));
        }
        let mut names: Vec<String> = (1..=m).map(|i| format!("a{i}")).collect();
        names.push("sigma".into());
        names.push("t".into());
        let mut roles: Vec<Role> = (0..m).map(Role::FreeAuto).collect();
        roles.push(Role::Sigma);
        roles.push(Role::Central);
        Self::make(ModelKind::Bm(m), names, roles)
    }

    /// `Z * Z^(k-1)` on `b` and `s_1..s_(k-1)`.
    pub fn free_product_zzk(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Param("Z * Z^(k-1) needs k >= 2".into()));
        }
        let mut names = vec!["b".to_string()];
        names.extend((1..k).map(|i| format!("s{i}")));
        let mut roles = vec![Role::ZFactor];
        roles.extend((0..k - 1).map(Role::Coord));
        Self::make(ModelKind::FreeProductZZk(k), names, roles)
    }

    /// Model named on the command line, sized from the presentation family.
    pub fn for_presentation(name: &str, p: &Presentation) -> Result<Self> {
        let fam = p.family();
        match name {
            "theta" => Self::theta(fam.k().ok_or_else(|| Error::WrongFamily(format!("theta model for {fam}")))?),
            "hattheta" | "hat_theta" => {
                Self::hat_theta(fam.k().ok_or_else(|| Error::WrongFamily(format!("hat theta model for {fam}")))?)
            }
            "bm" => Self::bm(fam.m().ok_or_else(|| Error::WrongFamily(format!("B_m model for {fam}")))?),
            "free_abelian" | "abelian" => Self::free_abelian_named(p.alphabet().symbols()),
            "free" => Self::free_named(p.alphabet().symbols()),
            other => Err(Error::Param(format!("unknown model {other}"))),
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// True when the presentation is the standard one for this model's group.
    pub fn presents(&self, p: &Presentation) -> bool {
        let names_match = p.alphabet().symbols() == self.alphabet.symbols();
        match (self.kind, p.family()) {
            (ModelKind::Theta(k), Family::Ok { k: k2 }) => k == *k2,
            (ModelKind::HatTheta(k), Family::HatOk { k: k2 }) => k == *k2,
            (ModelKind::Bm(m), Family::Bm { m: m2 }) => m == *m2,
            (ModelKind::Free(_), Family::Custom(_)) => names_match && p.relators().is_empty(),
            (ModelKind::FreeAbelian(k), Family::Custom(_)) => {
                if !names_match {
                    return false;
                }
                let mut want = std::collections::HashSet::new();
                for i in 0..k {
                    for j in i + 1..k {
                        let (x, y) = (Letter::pos(i as u32), Letter::pos(j as u32));
                        want.insert(vec![x.inverse(), y.inverse(), x, y]);
                    }
                }
                p.relators().len() == want.len()
                    && want.iter().all(|c| p.is_relator_conjugate(c))
            }
            _ => false,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self.kind {
            ModelKind::FreeAbelian(k) => GroupElement::Vector(vec![0; k]),
            ModelKind::Free(_) => GroupElement::Free(Vec::new()),
            ModelKind::Theta(k) | ModelKind::HatTheta(k) => GroupElement::Semi { z: vec![0; k], w: Vec::new() },
            ModelKind::Bm(_) => GroupElement::Bm { u: Vec::new(), w: Vec::new() },
            ModelKind::FreeProductZZk(_) => GroupElement::Alt(Vec::new()),
        }
    }

    fn phi(&self, u: &[Letter], inverse: bool) -> Vec<Letter> {
        let m = self.phi_inv.len();
        let mut out = Vec::with_capacity(u.len() + 4);
        for &l in u {
            let i = l.sym() as usize;
            let img: Vec<Letter> = if inverse {
                self.phi_inv[i].clone()
            } else if i + 1 < m {
                vec![Letter::pos(i as u32), Letter::pos(i as u32 + 1)]
            } else {
                vec![Letter::pos(i as u32)]
            };
            let img = if l.is_inverse() { crate::word::invert_letters(&img) } else { img };
            for x in img {
                push_reduced(&mut out, x);
            }
        }
        out
    }

    /// Right multiplication by one generator letter of the model alphabet.
    pub fn step(&self, e: &mut GroupElement, l: Letter) {
        let role = self.roles[l.sym() as usize];
        let sgn = l.sign();
        match (e, role) {
            (GroupElement::Vector(z), Role::Coord(i)) => z[i] += sgn,
            (GroupElement::Free(w), _) => push_reduced(w, l),
            (GroupElement::Semi { z, .. }, Role::Coord(i)) => z[i] += sgn,
            (GroupElement::Semi { z, w }, Role::Stable(j)) => {
                let (m, minv) = &self.actions[j];
                *z = if sgn > 0 { m.apply(z) } else { minv.apply(z) };
                push_reduced(w, l);
            }
            (GroupElement::Bm { u, .. }, Role::FreeAuto(_)) => push_reduced(u, l),
            (GroupElement::Bm { u, w }, Role::Sigma) => {
                *u = self.phi(u, sgn < 0);
                push_reduced(w, l);
            }
            (GroupElement::Bm { w, .. }, Role::Central) => push_reduced(w, l),
            (GroupElement::Alt(syl), Role::ZFactor) => {
                if let Some(Syllable::B(b)) = syl.last_mut() {
                    *b += sgn;
                    if *b == 0 {
                        syl.pop();
                    }
                } else {
                    syl.push(Syllable::B(sgn));
                }
            }
            (GroupElement::Alt(syl), Role::Coord(i)) => {
                if let Some(Syllable::V(v)) = syl.last_mut() {
                    v[i] += sgn;
                    if v.iter().all(|x| *x == 0) {
                        syl.pop();
                    }
                } else {
                    let ModelKind::FreeProductZZk(k) = self.kind else { unreachable!() };
                    let mut v = vec![0; k - 1];
                    v[i] = sgn;
                    syl.push(Syllable::V(v));
                }
            }
            _ => unreachable!("generator role does not match element variant"),
        }
    }

    /// Translates the letters of `w` into model letters by generator name.
    pub fn translate(&self, w: &Word) -> Result<Vec<Letter>> {
        let src = w.alphabet();
        let mut table: Vec<Option<u32>> = vec![None; src.len()];
        for (i, name) in src.symbols().iter().enumerate() {
            table[i] = self.alphabet.index(name);
        }
        w.letters()
            .iter()
            .map(|l| match table[l.sym() as usize] {
                Some(t) => Ok(Letter::new(t, l.is_inverse())),
                None => Err(Error::AlphabetMismatch(format!(
                    "generator {} is not in the model",
                    src.name(l.sym())
                ))),
            })
            .collect()
    }

    pub fn eval_letters(&self, letters: &[Letter]) -> GroupElement {
        let mut e = self.identity();
        for &l in letters {
            self.step(&mut e, l);
        }
        e
    }

    pub fn eval(&self, w: &Word) -> Result<GroupElement> {
        Ok(self.eval_letters(&self.translate(w)?))
    }

    /// A word in model letters representing `e`.
    pub fn word_of(&self, e: &GroupElement) -> Vec<Letter> {
        let powers = |z: &[i64], offset: u32| -> Vec<Letter> {
            let mut out = Vec::new();
            for (i, &c) in z.iter().enumerate() {
                let l = Letter::new(offset + i as u32, c < 0);
                out.extend(std::iter::repeat(l).take(c.unsigned_abs() as usize));
            }
            out
        };
        match e {
            GroupElement::Vector(z) => powers(z, 0),
            GroupElement::Free(w) => w.clone(),
            GroupElement::Semi { z, w } => {
                let mut out = w.clone();
                out.extend(powers(z, 0));
                out
            }
            GroupElement::Bm { u, w } => {
                let mut out = w.clone();
                out.extend_from_slice(u);
                out
            }
            GroupElement::Alt(syl) => {
                let mut out = Vec::new();
                for s in syl {
                    match s {
                        Syllable::B(b) => {
                            out.extend(std::iter::repeat(Letter::new(0, *b < 0)).take(b.unsigned_abs() as usize))
                        }
                        Syllable::V(v) => out.extend(powers(v, 1)),
                    }
                }
                out
            }
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut e = a.clone();
        for l in self.word_of(b) {
            self.step(&mut e, l);
        }
        e
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        self.eval_letters(&crate::word::invert_letters(&self.word_of(a)))
    }

    pub fn is_identity(&self, e: &GroupElement) -> bool {
        *e == self.identity()
    }

    /// The exponent `e` with `w = x^e`, if any.
    pub fn is_power_of(&self, w: &Word, x: &str) -> Result<Option<i64>> {
        let xs = self
            .alphabet
            .index(x)
            .ok_or_else(|| Error::AlphabetMismatch(format!("{x} is not a model generator")))?;
        let e = self.eval(w)?;
        let count = |ls: &[Letter]| ls.iter().filter(|l| l.sym() == xs).map(|l| l.sign()).sum::<i64>();
        let cand = match (&e, self.roles[xs as usize]) {
            (GroupElement::Vector(z), Role::Coord(i)) => z[i],
            (GroupElement::Semi { z, .. }, Role::Coord(i)) => z[i],
            (GroupElement::Semi { w, .. }, _) => count(w),
            (GroupElement::Free(w), _) => count(w),
            (GroupElement::Bm { u, .. }, Role::FreeAuto(_)) => count(u),
            (GroupElement::Bm { w, .. }, _) => count(w),
            (GroupElement::Alt(s), Role::ZFactor) => {
                s.iter().map(|y| if let Syllable::B(b) = y { *b } else { 0 }).sum()
            }
            (GroupElement::Alt(s), Role::Coord(i)) => {
                s.iter().map(|y| if let Syllable::V(v) = y { v[i] } else { 0 }).sum()
            }
            _ => 0,
        };
        let l = Letter::new(xs, cand < 0);
        let pw = vec![l; cand.unsigned_abs() as usize];
        Ok(if self.eval_letters(&pw) == e { Some(cand) } else { None })
    }

    /// Signed generators in alphabet order, positive before negative.
    pub fn signed_generators(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(2 * self.alphabet.len());
        for s in 0..self.alphabet.len() as u32 {
            out.push(Letter::pos(s));
            out.push(Letter::neg(s));
        }
        out
    }

    pub fn display(&self, e: &GroupElement) -> String {
        let fmt_w = |w: &[Letter]| {
            if w.is_empty() {
                String::new()
            } else {
                self.alphabet.format_letters(w)
            }
        };
        match e {
            GroupElement::Vector(z) => format!("{z:?}"),
            GroupElement::Free(w) => format!("\"{}\"", fmt_w(w)),
            GroupElement::Semi { z, w } => format!("(z={z:?}, w=\"{}\")", fmt_w(w)),
            GroupElement::Bm { u, w } => format!("(u=\"{}\", w=\"{}\")", fmt_w(u), fmt_w(w)),
            GroupElement::Alt(s) => format!("{s:?}"),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::FreeAbelian(k) => write!(f, "FreeAbelian({k})"),
            ModelKind::Free(r) => write!(f, "Free({r})"),
            ModelKind::Theta(k) => write!(f, "Theta({k})"),
            ModelKind::HatTheta(k) => write!(f, "HatTheta({k})"),
            ModelKind::Bm(m) => write!(f, "Bm({m})"),
            ModelKind::FreeProductZZk(k) => write!(f, "FreeProductZZk({k})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{build_presentation, Family};

    #[test]
    fn theta_conjugation() {
        let m = GroupModel::theta(2).unwrap();
        let p = build_presentation(&Family::Ok { k: 2 }).unwrap();
        let e = m.eval(&p.word("f^-1 s1 f").unwrap()).unwrap();
        assert_eq!(e, GroupElement::Semi { z: vec![1, 1], w: vec![] });
        assert!(m.is_identity(&m.eval(&Word::empty(p.alphabet().clone())).unwrap()));
        assert_eq!(m.is_power_of(&p.word("f^-1 s2 f").unwrap(), "s2").unwrap(), Some(1));
        assert_eq!(m.is_power_of(&p.word("s1").unwrap(), "s2").unwrap(), None);
        assert_eq!(m.is_power_of(&p.word("1").unwrap(), "f").unwrap(), Some(0));
        for r in p.relators() {
            assert!(m.is_identity(&m.eval(r).unwrap()), "{r}");
        }
    }

    #[test]
    fn bm_conjugation() {
        let m = GroupModel::bm(2).unwrap();
        let p = build_presentation(&Family::Bm { m: 2 }).unwrap();
        let e = m.eval(&p.word("sigma^-1 a1 sigma t").unwrap()).unwrap();
        assert_eq!(
            e,
            GroupElement::Bm { u: vec![Letter::pos(0), Letter::pos(1)], w: vec![Letter::pos(3)] }
        );
        for mm in 2..5 {
            let model = GroupModel::bm(mm).unwrap();
            let p = build_presentation(&Family::Bm { m: mm }).unwrap();
            for r in p.relators() {
                assert!(model.is_identity(&model.eval(r).unwrap()), "{r}");
            }
            let u = p.word("sigma a1 t^-1 sigma^-1 a2").unwrap();
            let v = p.word("sigma^-1 a1^-1 sigma sigma t").unwrap();
            let lhs = model.eval(&u.concat(&v).unwrap()).unwrap();
            let rhs = model.mul(&model.eval(&u).unwrap(), &model.eval(&v).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn matrices_invert_exactly() {
        for k in 2..7 {
            for m in [
                ActionMatrix::subdiagonal_unipotent(k),
                ActionMatrix::g_action(k),
                ActionMatrix::lower_triangular_ones(k),
            ] {
                assert_eq!(m.mul(&m.inverse_unipotent()), ActionMatrix::identity(k));
            }
        }
    }

    #[test]
    fn free_product_normal_form() {
        let m = GroupModel::free_product_zzk(3).unwrap();
        let al = m.alphabet().clone();
        let w = Word::parse(&al, "b s1 s2 s1^-1 s2^-1 b^-1").unwrap();
        assert!(m.is_identity(&m.eval(&w).unwrap()));
        let w = Word::parse(&al, "b s1 b^-1 s1^-1").unwrap();
        assert!(!m.is_identity(&m.eval(&w).unwrap()));
    }
}
