//! Extrinsic diameters (exact through a model, or retraction lower bounds) and the
//! closed-form distortion bounds with their matrix powers.

use std::collections::HashMap;
use std::fmt;

use crate::cayley::distance_to;
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::models::{ActionMatrix, GroupElement, GroupModel};
use crate::presentation::{build_presentation, Family, Retraction};
use crate::word::{Image, Letter, Word};

/// `C(a, b)`, zero when `b > a`.
pub fn binomial(a: u64, b: u64) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn binom_i(a: i64, b: i64) -> u128 {
    if a < 0 || b < 0 {
        return 0;
    }
    binomial(a as u64, b as u64)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiameterReport {
    pub idiam: u32,
    pub idiam_witness: u32,
    /// value, cap used, witness vertex
    pub ediam_exact: Option<(u32, u32, u32)>,
    /// retraction name, value, witness vertex
    pub ediam_lower: Vec<(String, u64, u32)>,
}

impl DiameterReport {
    pub fn best_lower(&self) -> u64 {
        self.ediam_lower.iter().map(|x| x.1).max().unwrap_or(0)
    }

    /// Lower bounds do not exceed the exact value, which does not exceed idiam.
    pub fn sandwich_holds(&self) -> bool {
        let upper = self.ediam_exact.map_or(self.idiam, |e| e.0);
        self.best_lower() <= upper as u64 && upper <= self.idiam
    }

    pub fn csv_header() -> &'static str {
        "idiam,ediam_exact,cap,lower_bounds"
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let (e, c) = match self.ediam_exact {
            Some((v, c, _)) => (v.to_string(), c.to_string()),
            None => (String::new(), String::new()),
        };
        let lower = self.ediam_lower.iter().map(|(n, v, _)| format!("{n}={v}")).collect::<Vec<_>>().join(";");
        vec![self.idiam.to_string(), e, c, lower]
    }
}

impl fmt::Display for DiameterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "idiam {} witness {}", self.idiam, self.idiam_witness)?;
        if let Some((v, c, w)) = self.ediam_exact {
            writeln!(f, "ediam_exact {v} cap {c} witness {w}")?;
        }
        for (n, v, w) in &self.ediam_lower {
            writeln!(f, "ediam_lower {n} {v} witness {w}")?;
        }
        Ok(())
    }
}

/// Model element at every vertex, following the breadth-first tree.
fn vertex_elements(d: &Diagram, model: &GroupModel) -> Result<Vec<GroupElement>> {
    let src = d.presentation().alphabet();
    let mut table = Vec::with_capacity(src.len());
    for name in src.symbols() {
        table.push(model.alphabet().index(name).ok_or_else(|| {
            Error::AlphabetMismatch(format!("generator {name} is not in the model"))
        })?);
    }
    let t = d.bfs_tree();
    let mut el: Vec<Option<GroupElement>> = vec![None; d.vertex_count()];
    for &v in &t.order {
        let e = match t.parent[v as usize] {
            None => model.identity(),
            Some(dart) => {
                let mut e = el[d.tail(dart) as usize].clone().expect("parent visited first");
                let l = d.label(dart);
                model.step(&mut e, Letter::new(table[l.sym() as usize], l.is_inverse()));
                e
            }
        };
        el[v as usize] = Some(e);
    }
    el.into_iter()
        .enumerate()
        .map(|(v, e)| e.ok_or_else(|| Error::InvalidDiagram(format!("vertex {v} unreachable"))))
        .collect()
}

/// Exact extrinsic diameter with its witness vertex.
pub fn ediam_exact(d: &Diagram, model: &GroupModel, cap: u32) -> Result<(u32, u32)> {
    if !model.presents(d.presentation()) {
        return Err(Error::WrongFamily(format!(
            "model {} does not present {}",
            model.kind(),
            d.presentation().family()
        )));
    }
    let els = vertex_elements(d, model)?;
    let mut cache: HashMap<GroupElement, u32> = HashMap::new();
    let mut best = (0u32, d.base());
    for (v, e) in els.iter().enumerate() {
        let dist = match cache.get(e) {
            Some(&x) => x,
            None => {
                let x = distance_to(model, e, cap)?.ok_or(Error::ExceedsCap { vertex: v as u32, cap })?;
                cache.insert(e.clone(), x);
                x
            }
        };
        if dist > best.0 {
            best = (dist, v as u32);
        }
    }
    Ok(best)
}

/// Largest absolute potential of the retraction image over all vertices, with a witness.
pub fn ediam_lower_retraction(d: &Diagram, r: &Retraction) -> Result<(u64, u32)> {
    r.check_exponent_zero()?;
    if r.source.alphabet().symbols() != d.presentation().alphabet().symbols() {
        return Err(Error::AlphabetMismatch(format!(
            "retraction {} is not defined on {}",
            r.name,
            d.presentation().family()
        )));
    }
    let t = d.bfs_tree();
    let mut pot = vec![0i64; d.vertex_count()];
    let mut best = (0u64, d.base());
    for &v in &t.order {
        if let Some(dart) = t.parent[v as usize] {
            let l = d.label(dart);
            let step = match r.map.image_of(l.positive()) {
                Image::Erase => 0,
                Image::Letter(_) => l.sign(),
            };
            pot[v as usize] = pot[d.tail(dart) as usize] + step;
        }
        let a = pot[v as usize].unsigned_abs();
        if a > best.0 {
            best = (a, v);
        }
    }
    Ok(best)
}

/// Measures everything available: idiam, the model value when a model is given, and each retraction.
pub fn measure(d: &Diagram, model: Option<(&GroupModel, u32)>, retractions: &[Retraction]) -> Result<DiameterReport> {
    let (idiam, idiam_witness) = d.idiam_with_witness();
    let ediam_exact = match model {
        Some((m, cap)) => {
            let (v, w) = ediam_exact(d, m, cap)?;
            Some((v, cap, w))
        }
        None => None,
    };
    let mut ediam_lower = Vec::new();
    for r in retractions {
        let (v, w) = ediam_lower_retraction(d, r)?;
        ediam_lower.push((r.name.clone(), v, w));
    }
    Ok(DiameterReport { idiam, idiam_witness, ediam_exact, ediam_lower })
}

fn counts(u0: &Word, names: &[String]) -> Result<Vec<u64>> {
    names.iter().map(|n| u0.letter_count(n).map(|c| c as u64)).collect()
}

/// Bound on `|m|` for any `u0` equal to `s_k^m`, from the letter counts of `u0`.
pub fn distortion_bound_theta(k: usize, u0: &Word) -> Result<u128> {
    if k < 1 {
        return Err(Error::Param("k must be at least 1".into()));
    }
    let fg = counts(u0, &["f".to_string(), "g".to_string()])?;
    let lf = fg[0] + fg[1];
    if lf % 2 == 1 {
        return Err(Error::Precondition(format!("f and g letters total {lf}, which is odd")));
    }
    let c = (lf / 2) as i64;
    let names: Vec<String> = (1..=k).map(|i| format!("s{i}")).collect();
    let ls = counts(u0, &names)?;
    if c == 0 {
        return Ok(ls[k - 1] as u128);
    }
    let kk = k as i64;
    Ok((1..=kk).map(|i| binom_i(c + kk - 1 - i, c - 1) * ls[(i - 1) as usize] as u128).sum())
}

/// `|h_t(w)| + C(n+k-2, k-1) n` with `n` the number of non-`t` letters.
pub fn t_distortion_bound(k: usize, w: &Word) -> Result<u128> {
    let lt = w.letter_count("t")?;
    let ht = w.exponent_sum("t")?;
    let n = (w.len() - lt) as i64;
    let kk = k as i64;
    Ok(ht.unsigned_abs() as u128 + binom_i(n + kk - 2, kk - 1) * n as u128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    SubdiagonalUnipotent,
    LowerTriangularOnes,
}

impl MatrixKind {
    pub fn base(&self, k: usize) -> ActionMatrix {
        match self {
            MatrixKind::SubdiagonalUnipotent => ActionMatrix::subdiagonal_unipotent(k),
            MatrixKind::LowerTriangularOnes => ActionMatrix::lower_triangular_ones(k),
        }
    }
}

/// The `n`-th power from its closed form.
pub fn matrix_power(kind: MatrixKind, k: usize, n: u32) -> ActionMatrix {
    let mut m = ActionMatrix::identity(k);
    if n == 0 {
        return m;
    }
    let n = n as i64;
    for i in 0..k {
        for j in 0..i {
            let d = (i - j) as i64;
            let v = match kind {
                MatrixKind::SubdiagonalUnipotent => binom_i(n, d),
                MatrixKind::LowerTriangularOnes => binom_i(n + d - 1, n - 1),
            };
            m.set(i, j, v as i64);
        }
    }
    m
}

/// `log_c(3^H)` with `H = |h_t| / (1 + l_u)`.
pub fn fat_bound(h_t: i64, l_u: usize, c: f64) -> Result<f64> {
    if !(c > 1.0) {
        return Err(Error::Param(format!("degree constant must exceed 1, got {c}")));
    }
    let h = h_t.unsigned_abs() as f64 / (1.0 + l_u as f64);
    Ok(h * 3f64.ln() / c.ln())
}

/// Twice the number of generators of the amalgam presentation.
pub fn default_fat_constant(k: usize, m: usize) -> Result<f64> {
    let p = build_presentation(&Family::Skm { k, m })?;
    Ok(2.0 * p.alphabet().len() as f64)
}
