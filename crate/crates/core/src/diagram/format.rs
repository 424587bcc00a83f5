//! Line-based interchange format.
//!
//! ```text
//! fillscope diagram v1
//! presentation Pk k=2
//! vertices 3
//! vertex 0
//! edge 0 0 1 t
//! rot 0: +0 -2
//! base 0
//! outer +0
//! cert:
//! family delta
//! param m 3
//! boundary t^-3 ...
//! area 41
//! meta idiam 17
//! end
//! ```
//!
//! Custom presentations are written as `presentation Custom <name>` followed by their
//! `gens:` and `rel:` lines.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{dart_name, parse_dart, Diagram};
use crate::error::{Error, Result};
use crate::presentation::{build_presentation, Family, Presentation};
use crate::word::Letter;

pub const HEADER: &str = "fillscope diagram v1";

/// Construction metadata carried alongside a diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub family: String,
    pub params: Vec<(String, i64)>,
    pub boundary: String,
    pub area: u64,
    pub meta: Vec<(String, String)>,
}

impl Certificate {
    pub fn new(family: &str, d: &Diagram) -> Self {
        Certificate {
            family: family.to_string(),
            params: Vec::new(),
            boundary: d.boundary_word().to_string(),
            area: d.area() as u64,
            meta: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, v: i64) -> Self {
        self.params.push((key.to_string(), v));
        self
    }

    pub fn with_meta(mut self, key: &str, v: impl ToString) -> Self {
        self.meta.push((key.to_string(), v.to_string()));
        self
    }

    pub fn get_param(&self, key: &str) -> Option<i64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn get_meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Checks the recorded boundary word and area against the diagram.
    pub fn check(&self, d: &Diagram) -> Result<()> {
        let b = d.boundary_word().to_string();
        if b != self.boundary {
            return Err(Error::InvalidDiagram(format!(
                "certificate boundary {} but diagram reads {b}",
                self.boundary
            )));
        }
        if d.area() as u64 != self.area {
            return Err(Error::InvalidDiagram(format!(
                "certificate area {} but diagram has {} faces",
                self.area,
                d.area()
            )));
        }
        Ok(())
    }
}

pub fn to_text(d: &Diagram, cert: Option<&Certificate>) -> String {
    let mut s = String::new();
    let alpha = d.presentation().alphabet();
    s.push_str(HEADER);
    s.push('\n');
    let fam = d.presentation().family();
    let _ = writeln!(s, "presentation {fam}");
    if let Family::Custom(_) = fam {
        s.push_str(&d.presentation().to_text());
    }
    let _ = writeln!(s, "vertices {}", d.vertex_count());
    for v in 0..d.vertex_count() {
        let _ = writeln!(s, "vertex {v}");
    }
    for e in 0..d.edge_count() as u32 {
        let (a, b, l) = d.edge(e);
        let _ = writeln!(s, "edge {e} {a} {b} {}", alpha.name(l.sym()));
    }
    for v in 0..d.vertex_count() as u32 {
        let _ = write!(s, "rot {v}:");
        for &x in d.rotation(v) {
            let _ = write!(s, " {}", dart_name(x));
        }
        s.push('\n');
    }
    let _ = writeln!(s, "base {}", d.base());
    match d.outer() {
        Some(o) => {
            let _ = writeln!(s, "outer {}", dart_name(o));
        }
        None => s.push_str("outer none\n"),
    }
    if let Some(c) = cert {
        s.push_str("cert:\n");
        let _ = writeln!(s, "family {}", c.family);
        for (k, v) in &c.params {
            let _ = writeln!(s, "param {k} {v}");
        }
        let _ = writeln!(s, "boundary {}", c.boundary);
        let _ = writeln!(s, "area {}", c.area);
        for (k, v) in &c.meta {
            let _ = writeln!(s, "meta {k} {v}");
        }
        s.push_str("end\n");
    }
    s
}

fn perr(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn parse_family(header: &str) -> Result<Family> {
    let mut parts = header.split_whitespace();
    let tag = parts.next().ok_or_else(|| Error::Parse("empty presentation line".into()))?;
    let mut k = None;
    let mut m = None;
    for p in parts {
        let (key, val) = p.split_once('=').ok_or_else(|| Error::Parse(format!("bad parameter {p}")))?;
        let val: usize = val.parse().map_err(|_| Error::Parse(format!("bad parameter {p}")))?;
        match key {
            "k" => k = Some(val),
            "m" => m = Some(val),
            _ => return Err(Error::Parse(format!("unknown parameter {key}"))),
        }
    }
    Family::from_parts(tag, k, m)
}

pub fn from_text(text: &str) -> Result<(Diagram, Option<Certificate>)> {
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    let skip = |i: &mut usize| {
        while *i < lines.len() && (lines[*i].trim().is_empty() || lines[*i].trim_start().starts_with('#')) {
            *i += 1;
        }
    };
    skip(&mut i);
    if i >= lines.len() || lines[i].trim() != HEADER {
        return Err(perr(i + 1, format!("expected header {HEADER:?}")));
    }
    i += 1;
    skip(&mut i);
    let pline = lines.get(i).ok_or_else(|| perr(i + 1, "missing presentation line"))?;
    let header = pline.trim().strip_prefix("presentation ").ok_or_else(|| perr(i + 1, "expected presentation"))?;
    i += 1;
    let pres = if let Some(name) = header.strip_prefix("Custom ") {
        let mut body = String::new();
        while i < lines.len() {
            let t = lines[i].trim();
            if t.starts_with("gens:") || t.starts_with("rel:") {
                body.push_str(t);
                body.push('\n');
                i += 1;
            } else {
                break;
            }
        }
        let p = Presentation::parse_text(name.trim(), &body)?;
        Presentation::new(p.alphabet().clone(), p.relators().to_vec(), Family::Custom(name.trim().to_string()))?
    } else {
        build_presentation(&parse_family(header)?)?
    };
    let pres = Arc::new(pres);
    let alpha = pres.alphabet().clone();
    let mut n_vertices: Option<u32> = None;
    let mut vertex_lines = 0u32;
    let mut edges: Vec<(u32, u32, Letter)> = Vec::new();
    let mut rot: Vec<Option<Vec<u32>>> = Vec::new();
    let mut base = None;
    let mut outer: Option<Option<u32>> = None;
    let mut cert = None;
    while i < lines.len() {
        let ln = i + 1;
        let t = lines[i].trim();
        i += 1;
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (kw, rest) = t.split_once(' ').unwrap_or((t, ""));
        match kw {
            "vertices" => {
                let n: u32 = rest.trim().parse().map_err(|_| perr(ln, "bad vertex count"))?;
                n_vertices = Some(n);
                rot = vec![None; n as usize];
            }
            "vertex" => {
                let v: u32 = rest.trim().parse().map_err(|_| perr(ln, "bad vertex id"))?;
                if v != vertex_lines {
                    return Err(perr(ln, format!("vertex ids must be consecutive, got {v}")));
                }
                vertex_lines += 1;
            }
            "edge" => {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if f.len() != 4 {
                    return Err(perr(ln, "edge needs id, from, to, label"));
                }
                let id: usize = f[0].parse().map_err(|_| perr(ln, "bad edge id"))?;
                if id != edges.len() {
                    return Err(perr(ln, format!("edge ids must be consecutive, got {id}")));
                }
                let a: u32 = f[1].parse().map_err(|_| perr(ln, "bad endpoint"))?;
                let b: u32 = f[2].parse().map_err(|_| perr(ln, "bad endpoint"))?;
                let s = alpha.index(f[3]).ok_or_else(|| perr(ln, format!("unknown generator {}", f[3])))?;
                edges.push((a, b, Letter::pos(s)));
            }
            "rot" => {
                let (v, list) = rest.split_once(':').ok_or_else(|| perr(ln, "rot needs a colon"))?;
                let v: usize = v.trim().parse().map_err(|_| perr(ln, "bad vertex id"))?;
                let darts = list.split_whitespace().map(parse_dart).collect::<Result<Vec<_>>>()?;
                let slot = rot.get_mut(v).ok_or_else(|| perr(ln, "rotation for unknown vertex"))?;
                if slot.is_some() {
                    return Err(perr(ln, "duplicate rotation line"));
                }
                *slot = Some(darts);
            }
            "base" => base = Some(rest.trim().parse::<u32>().map_err(|_| perr(ln, "bad base"))?),
            "outer" => {
                outer = Some(if rest.trim() == "none" { None } else { Some(parse_dart(rest.trim())?) });
            }
            "cert:" => {
                let mut c = Certificate::default();
                let mut closed = false;
                while i < lines.len() {
                    let ln = i + 1;
                    let t = lines[i].trim();
                    i += 1;
                    if t == "end" {
                        closed = true;
                        break;
                    }
                    let (kw, rest) = t.split_once(' ').unwrap_or((t, ""));
                    match kw {
                        "family" => c.family = rest.to_string(),
                        "param" => {
                            let (k, v) = rest.split_once(' ').ok_or_else(|| perr(ln, "param needs a value"))?;
                            let v: i64 = v.trim().parse().map_err(|_| perr(ln, "bad param value"))?;
                            c.params.push((k.to_string(), v));
                        }
                        "boundary" => c.boundary = rest.to_string(),
                        "area" => c.area = rest.trim().parse().map_err(|_| perr(ln, "bad area"))?,
                        "meta" => {
                            let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
                            c.meta.push((k.to_string(), v.to_string()));
                        }
                        _ => return Err(perr(ln, format!("unknown certificate line {kw}"))),
                    }
                }
                if !closed {
                    return Err(perr(lines.len(), "certificate without end"));
                }
                cert = Some(c);
            }
            _ => return Err(perr(ln, format!("unknown keyword {kw}"))),
        }
    }
    let n = n_vertices.ok_or_else(|| Error::Parse("missing vertices line".into()))?;
    if vertex_lines != n {
        return Err(Error::Parse(format!("{vertex_lines} vertex lines for {n} vertices")));
    }
    let rot = rot
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| Error::Parse(format!("missing rotation for vertex {v}"))))
        .collect::<Result<Vec<_>>>()?;
    let base = base.ok_or_else(|| Error::Parse("missing base line".into()))?;
    let outer = outer.ok_or_else(|| Error::Parse("missing outer line".into()))?;
    let d = Diagram::from_parts(pres, n, edges, rot, base, outer)?;
    Ok((d, cert))
}
