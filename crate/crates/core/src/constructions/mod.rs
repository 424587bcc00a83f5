//! Builders for the explicit diagram and word families, each returned with a certificate.

use std::sync::Arc;

use crate::diagram::format::Certificate;
use crate::diagram::{dart_name, opp, Dart, Diagram, Keep, Pinch, Surface};
use crate::error::{Error, Result};
use crate::metrics::binomial;
use crate::presentation::{build_presentation, Family, Presentation};
use crate::word::{invert_letters, Letter, Word};

pub const DEFAULT_AREA_BUDGET: u64 = 5_000_000;

/// A constructed diagram, its certificate, and named boundary or interior arcs.
#[derive(Clone, Debug)]
pub struct Built {
    pub diagram: Diagram,
    pub cert: Certificate,
    pub arcs: Vec<(String, Vec<Dart>)>,
}

impl Built {
    pub fn arc(&self, name: &str) -> Option<&[Dart]> {
        self.arcs.iter().find(|(n, _)| n == name).map(|(_, a)| a.as_slice())
    }

    /// A word recorded in the certificate metadata, parsed over the diagram's alphabet.
    pub fn word(&self, key: &str) -> Result<Word> {
        let text = self
            .cert
            .get_meta(key)
            .ok_or_else(|| Error::Param(format!("certificate has no word {key}")))?;
        Word::parse(self.diagram.presentation().alphabet(), text)
    }
}

fn letter(p: &Presentation, name: &str) -> Result<Letter> {
    Ok(Letter::pos(p.sym(name)?))
}

fn s_name(i: usize) -> String {
    format!("s{i}")
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Param(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

/// `x -> conj^-1 x conj` on positive generator letters, for the `f` (or `sigma`) action.
fn shift_image(p: &Presentation, prefix: &str, k: usize, fixed_from: usize) -> Result<Vec<Vec<Letter>>> {
    // image of generator i (1-based): x_i x_{i+1} below `fixed_from`, x_i from there on
    let mut out = Vec::with_capacity(k);
    for i in 1..=k {
        let xi = letter(p, &format!("{prefix}{i}"))?;
        if i < fixed_from {
            out.push(vec![xi, letter(p, &format!("{prefix}{}", i + 1))?]);
        } else {
            out.push(vec![xi]);
        }
    }
    Ok(out)
}

fn apply_image(images: &[Vec<Letter>], syms: &[u32], w: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::new();
    for &l in w {
        let i = syms.iter().position(|&s| s == l.sym()).expect("letter outside the action");
        if l.is_inverse() {
            out.extend(invert_letters(&images[i]));
        } else {
            out.extend_from_slice(&images[i]);
        }
    }
    out
}

/// `f^-n s1^n f^n` as a positive word in `s1..sk`.
pub fn wn_word(k: usize, n: usize) -> Result<Word> {
    check_k(k)?;
    let p = build_presentation(&Family::Ok { k })?;
    let images = shift_image(&p, "s", k, k)?;
    let syms: Vec<u32> = (1..=k).map(|i| p.sym(&s_name(i))).collect::<Result<_>>()?;
    let mut w = vec![letter(&p, "s1")?; n];
    for _ in 0..n {
        w = apply_image(&images, &syms, &w);
    }
    Word::new(p.alphabet().clone(), w)
}

/// Rows of conjugation cells below a positive top word.
struct Stack {
    s: Surface,
    /// cells of each row, left to right from the base side: (arc dart, bottom length)
    rows: Vec<Vec<(Dart, usize)>>,
    /// darts of the last row's bottom, in walk order
    bottom: Vec<Dart>,
}

/// Builds `conj^-n Y conj^n (phi^n Y)^-1` with `n` rows of cells `conj phi(y)^-1 conj^-1`.
fn conj_stack(
    pres: &Arc<Presentation>,
    conj: Letter,
    top: &[Letter],
    n: usize,
    images: &[Vec<Letter>],
    syms: &[u32],
) -> Result<Stack> {
    let mut s = Surface::path(pres.clone(), top);
    let walk = s.outer_walk();
    let n0 = top.len();
    let mut arc: Vec<Dart> = walk[n0..].to_vec();
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = Vec::with_capacity(arc.len());
        let mut next_arc = Vec::new();
        let mut prev_last: Option<Dart> = None;
        for &a in &arc {
            let y = s.label(a).inverse();
            let mid = invert_letters(&apply_image(images, syms, &[y]));
            let mut v = Vec::with_capacity(mid.len() + 2);
            v.push(conj);
            v.extend_from_slice(&mid);
            v.push(conj.inverse());
            let vd = s.cell(&[a], &v)?;
            if let Some(pl) = prev_last {
                s.zip(pl, Keep::First, Pinch::Error)?;
            }
            next_arc.extend_from_slice(&vd[1..vd.len() - 1]);
            prev_last = Some(vd[vd.len() - 1]);
            row.push((a, mid.len()));
        }
        row.reverse();
        rows.push(row);
        arc = next_arc;
    }
    let walk = s.outer_walk();
    let len = walk.len();
    if n > 0 {
        s.rebase(walk[len - n]);
    }
    Ok(Stack { s, rows, bottom: arc })
}

fn ok_with_syms(k: usize) -> Result<(Arc<Presentation>, Vec<u32>)> {
    let p = Arc::new(build_presentation(&Family::Ok { k })?);
    let syms: Vec<u32> = (1..=k).map(|i| p.sym(&s_name(i))).collect::<Result<_>>()?;
    Ok((p, syms))
}

fn dn_stack(k: usize, n: usize, hatted_action: bool) -> Result<(Arc<Presentation>, Stack)> {
    let (p, syms) = ok_with_syms(k)?;
    let (conj, images) = if hatted_action {
        (letter(&p, "g")?, shift_image(&p, "s", k, k - 1)?)
    } else {
        (letter(&p, "f")?, shift_image(&p, "s", k, k)?)
    };
    let top = vec![letter(&p, "s1")?; n];
    let st = conj_stack(&p, conj, &top, n, &images, &syms)?;
    Ok((p, st))
}

fn finish_built(s: &Surface, family: &str, params: &[(&str, i64)]) -> Result<(Diagram, Vec<Option<Dart>>, Certificate)> {
    let (d, map) = s.finish()?;
    let mut cert = Certificate::new(family, &d);
    for (k, v) in params {
        cert = cert.param(k, *v);
    }
    Ok((d, map, cert))
}

fn map_arc(map: &[Option<Dart>], arc: &[Dart]) -> Vec<Dart> {
    arc.iter().filter_map(|&x| map[x as usize]).collect()
}

fn arc_text(arc: &[Dart]) -> String {
    arc.iter().map(|&d| dart_name(d)).collect::<Vec<_>>().join(" ")
}

/// The stack of `n` f-corridors with boundary `f^-n s1^n f^n w_n^-1`.
pub fn dn_diagram(k: usize, n: usize) -> Result<Built> {
    check_k(k)?;
    if n == 0 {
        return Err(Error::Param("n must be at least 1".into()));
    }
    let (p, st) = dn_stack(k, n, false)?;
    let wn = wn_word(k, n)?;
    let (d, map, cert) = finish_built(&st.s, "dn", &[("k", k as i64), ("n", n as i64)])?;
    let bottom: Vec<Dart> = map_arc(&map, &st.bottom).into_iter().rev().map(opp).collect();
    let _ = p;
    let cert = cert
        .with_meta("f_corridors", n)
        .with_meta("w_n", Word::from_raw(d.presentation().alphabet().clone(), wn.letters().to_vec()))
        .with_meta("arc.w_n", arc_text(&bottom));
    Ok(Built { diagram: d, cert, arcs: vec![("w_n".into(), bottom)] })
}

/// Least `n` with `n * C(n, k-1) >= m`.
pub fn least_n(k: usize, m: usize) -> usize {
    let mut n = 1usize;
    while (n as u128) * binomial(n as u64, (k - 1) as u64) < m as u128 {
        n += 1;
    }
    n
}

struct Cut {
    s: Surface,
    /// length of the part of the walk before the bottom prefix
    z_len: usize,
    prefix_len: usize,
}

/// Keeps the cells of a stack left of the path that climbs from bottom position `p`,
/// going up at corners and left inside cells.
fn cut_left(mut st: Stack, p: usize) -> Result<Cut> {
    let nrows = st.rows.len();
    let mut keep_arcs: Vec<Dart> = Vec::new();
    let mut pos = p;
    for r in (0..nrows).rev() {
        let row = &st.rows[r];
        let mut acc = 0usize;
        let mut c = row.len();
        for (i, &(_, len)) in row.iter().enumerate() {
            if acc == pos {
                c = i;
                break;
            }
            if acc < pos && pos < acc + len {
                if r == nrows - 1 {
                    return Err(Error::InvalidDiagram("cut starts inside a cell".into()));
                }
                c = i;
                break;
            }
            acc += len;
        }
        if c == row.len() && acc != pos {
            return Err(Error::InvalidDiagram("cut position beyond the stack".into()));
        }
        keep_arcs.extend(row[..c].iter().map(|&(a, _)| a));
        pos = c;
        if c == 0 {
            break;
        }
    }
    let (face_of, cycles) = st.s.faces();
    let mut keep = vec![false; cycles.len()];
    for a in keep_arcs {
        keep[face_of[a as usize] as usize] = true;
    }
    st.s.extract(&keep)?;
    let last = *st.bottom.last().expect("nonempty bottom");
    let o = st.s.sigma(last);
    st.s.rebase(o);
    let walk_len = st.s.outer_walk().len();
    Ok(Cut { s: st.s, z_len: walk_len - p, prefix_len: p })
}

/// Commutator cells moving the `mover` letters of an outer arc to its end (or start).
fn bubble(s: &mut Surface, arc: &mut [Dart], mover: &dyn Fn(Letter) -> bool, to_end: bool) -> Result<usize> {
    let mut cells = 0;
    let n = arc.len();
    let swap = |s: &mut Surface, arc: &mut [Dart], j: usize| -> Result<()> {
        let (x, y) = (s.label(arc[j]), s.label(arc[j + 1]));
        let v = s.cell(&arc[j..j + 2], &[y, x])?;
        arc[j] = v[0];
        arc[j + 1] = v[1];
        Ok(())
    };
    if to_end {
        for i in (0..n).rev() {
            if mover(s.label(arc[i])) {
                let mut j = i;
                while j + 1 < n && !mover(s.label(arc[j + 1])) {
                    swap(s, arc, j)?;
                    cells += 1;
                    j += 1;
                }
            }
        }
    } else {
        for i in 0..n {
            if mover(s.label(arc[i])) {
                let mut j = i;
                while j > 0 && !mover(s.label(arc[j - 1])) {
                    swap(s, arc, j - 1)?;
                    cells += 1;
                    j -= 1;
                }
            }
        }
    }
    Ok(cells)
}

/// Rotates the base so that the walk starts at index `i` of the current walk.
fn rotate(s: &mut Surface, i: usize) {
    let w = s.outer_walk();
    if !w.is_empty() {
        s.rebase(w[i % w.len()]);
    }
}

/// Glues `other` onto walk positions `[start, start+len)`.
fn glue_at(s: &mut Surface, start: usize, len: usize, other: &Surface) -> Result<Vec<Dart>> {
    let w = s.outer_walk();
    s.glue_arc(&w[start..start + len], other, Pinch::Error)
}

struct SigmaParts {
    s: Surface,
    n: usize,
    v: Vec<Letter>,
    z_len: usize,
    zhat_len: usize,
}

fn sigma_surface(k: usize, m: usize) -> Result<SigmaParts> {
    check_k(k)?;
    if m == 0 {
        return Err(Error::Param("m must be at least 1".into()));
    }
    let n = least_n(k, m);
    let wn = wn_word(k, n)?;
    let sk = wn.alphabet().require(&s_name(k))?;
    // prefix of w_n ending at the m-th s_k
    let mut seen = 0;
    let mut p = 0;
    for (i, l) in wn.letters().iter().enumerate() {
        if l.sym() == sk {
            seen += 1;
            if seen == m {
                p = i + 1;
                break;
            }
        }
    }
    let phat = p - m;
    let (pres, st) = dn_stack(k, n, false)?;
    let mut cut = cut_left(st, p)?;
    let (_, sthat) = dn_stack(k, n, true)?;
    let mut cuthat = cut_left(sthat, phat)?;
    let z_len = cut.z_len;
    let zhat_len = cuthat.z_len;
    // gather s_k to the end of the w_nm^-1 arc
    let w = cut.s.outer_walk();
    let mut arc: Vec<Dart> = w[z_len..z_len + cut.prefix_len].to_vec();
    bubble(&mut cut.s, &mut arc, &|l: Letter| l.sym() == sk, true)?;
    // glue the mirrored hatted cut, rotated to read Zhat^-1 what
    cuthat.s.mirror();
    let wl = cuthat.s.outer_walk().len();
    rotate(&mut cuthat.s, wl - zhat_len);
    let _ = glue_at(&mut cut.s, z_len, phat, &cuthat.s)?;
    cut.s.mirror();
    let walk = cut.s.outer_walk();
    let letters = cut.s.word_of(&walk);
    let v = invert_letters(&letters[m..]);
    let _ = pres;
    Ok(SigmaParts { s: cut.s, n, v, z_len, zhat_len })
}

/// Diagram for `s_k^m v_m^-1` with `v_m` of length at most `8n`.
pub fn sigma_m_diagram(k: usize, m: usize) -> Result<Built> {
    let sp = sigma_surface(k, m)?;
    let (d, _, cert) = finish_built(&sp.s, "sigma", &[("k", k as i64), ("m", m as i64), ("n", sp.n as i64)])?;
    let walk = d.boundary_darts();
    let v_arc: Vec<Dart> = walk[m..].to_vec();
    let mut verts: Vec<u32> = v_arc.iter().map(|&x| d.tail(x)).collect();
    verts.push(d.base());
    let dist = d.distances_from(&verts);
    let far = dist.iter().copied().filter(|&x| x != u32::MAX).max().unwrap_or(0);
    let v = Word::from_raw(d.presentation().alphabet().clone(), sp.v.clone());
    let cert = cert
        .with_meta("v_m", &v)
        .with_meta("len_v", v.len())
        .with_meta("z_len", sp.z_len)
        .with_meta("zhat_len", sp.zhat_len)
        .with_meta("v_arc_distance", far)
        .with_meta("arc.v_m", arc_text(&v_arc));
    Ok(Built { diagram: d, cert, arcs: vec![("v_m".into(), v_arc)] })
}

fn budget_check(faces: u128, budget: u64) -> Result<()> {
    if faces > budget as u128 {
        return Err(Error::AreaBudget { faces: faces.min(u64::MAX as u128) as u64, budget });
    }
    Ok(())
}

fn pow3(m: usize) -> u128 {
    3u128.checked_pow(m as u32).unwrap_or(u128::MAX)
}

/// `t^-m b s_k^m b^-(3^m)` (plain) or `hs_k^-m b hs_k^m b^-(3^m)` (hatted) over `Pk`.
fn bpower_surface(k: usize, m: usize, hatted: bool, budget: u64) -> Result<(Surface, Vec<Dart>)> {
    check_k(k)?;
    if m == 0 {
        return Err(Error::Param("m must be at least 1".into()));
    }
    budget_check(pow3(m).saturating_sub(1) / 2, budget)?;
    let p = Arc::new(build_presentation(&Family::Pk { k })?);
    let b = letter(&p, "b")?;
    let t = letter(&p, "t")?;
    let sk = letter(&p, &s_name(k))?;
    let hsk = letter(&p, &format!("hs{k}"))?;
    let mut s = Surface::path(p.clone(), &[b]);
    let mut arc = vec![s.outer_walk()[1]];
    for _ in 0..m {
        let mut next_arc = Vec::with_capacity(3 * arc.len());
        let mut prev_last: Option<Dart> = None;
        for (i, &a) in arc.iter().enumerate() {
            let v: Vec<Letter> = if hatted {
                vec![hsk, b.inverse(), b.inverse(), b.inverse(), hsk.inverse()]
            } else if i % 2 == 0 {
                vec![sk, b.inverse(), b.inverse(), b.inverse(), t.inverse()]
            } else {
                vec![t, b.inverse(), b.inverse(), b.inverse(), sk.inverse()]
            };
            let vd = s.cell(&[a], &v)?;
            if let Some(pl) = prev_last {
                s.zip(pl, Keep::First, Pinch::Error)?;
            }
            next_arc.extend_from_slice(&vd[1..4]);
            prev_last = Some(vd[4]);
        }
        arc = next_arc;
    }
    let walk = s.outer_walk();
    let len = walk.len();
    s.rebase(walk[len - m]);
    Ok((s, arc))
}

pub fn bpower_stack(k: usize, m: usize, hatted: bool) -> Result<Built> {
    bpower_stack_with_budget(k, m, hatted, DEFAULT_AREA_BUDGET)
}

pub fn bpower_stack_with_budget(k: usize, m: usize, hatted: bool, budget: u64) -> Result<Built> {
    let (s, arc) = bpower_surface(k, m, hatted, budget)?;
    let fam = if hatted { "bpower_hat" } else { "bpower" };
    let (d, map, cert) = finish_built(&s, fam, &[("k", k as i64), ("m", m as i64)])?;
    let top = map_arc(&map, &arc);
    let cert = cert.with_meta("top_b_edges", top.len()).with_meta("rows", m);
    Ok(Built { diagram: d, cert, arcs: vec![("top".into(), top)] })
}

impl Surface {
    /// Same surface over `target`, renaming each generator through `rename`.
    pub fn relabel(&self, target: Arc<Presentation>, rename: &dyn Fn(&str) -> String) -> Result<Surface> {
        let src = self.pres.alphabet().clone();
        let mut out = self.clone();
        for l in out.label.iter_mut() {
            let name = rename(src.name(l.sym()));
            let s = target.sym(&name)?;
            *l = Letter::new(s, l.is_inverse());
        }
        out.pres = target;
        Ok(out)
    }
}

pub fn delta_m_diagram(k: usize, m: usize) -> Result<Built> {
    delta_m_diagram_with_budget(k, m, DEFAULT_AREA_BUDGET)
}

/// Area of the assembled shortcut diagram, computed before building the stacks.
pub fn delta_m_area(k: usize, m: usize) -> Result<u128> {
    let sp = sigma_surface(k, m)?;
    Ok(pow3(m).saturating_sub(1) + 3 * sp.s.face_count() as u128)
}

/// Diagram for `t^m u_m^-1`: two b-power stacks glued along their `3^m` arc, with the
/// `s_k^m` and `hs_k^m` sides shortcut by copies of the sigma diagram.
pub fn delta_m_diagram_with_budget(k: usize, m: usize, budget: u64) -> Result<Built> {
    let sp = sigma_surface(k, m)?;
    let total = pow3(m).saturating_sub(1) + 3 * sp.s.face_count() as u128;
    budget_check(total, budget)?;
    let pk = Arc::new(build_presentation(&Family::Pk { k })?);
    let sig = sp.s.relabel(pk.clone(), &|n| n.to_string())?;
    let sighat = sp.s.relabel(pk.clone(), &|n| format!("h{n}"))?;
    let (mut a, barc) = bpower_surface(k, m, false, budget)?;
    let (mut bh, _) = bpower_surface(k, m, true, budget)?;
    let nb = 3usize.pow(m as u32);
    bh.mirror();
    rotate(&mut bh, nb);
    let _ = glue_at(&mut a, 2 * m + 1, nb, &bh)?;
    // walk: t^-m b s^m hs^-m b^-1 hs^m
    let mut msh = sighat.clone();
    msh.mirror();
    let _ = glue_at(&mut a, 3 * m + 2, m, &msh)?;
    let mut sh = sighat.clone();
    rotate(&mut sh, m);
    let _ = glue_at(&mut a, 2 * m + 1, m, &sh)?;
    let mut ms = sig.clone();
    ms.mirror();
    let _ = glue_at(&mut a, m + 1, m, &ms)?;
    let walk = a.outer_walk();
    let u: Vec<Letter> = a.word_of(&walk[m..]);
    a.mirror();
    rotate(&mut a, u.len());
    let (d, map, cert) = finish_built(&a, "delta", &[("k", k as i64), ("m", m as i64), ("n", sp.n as i64)])?;
    let barc = map_arc(&map, &barc);
    let um = Word::from_raw(pk.alphabet().clone(), u);
    let v = Word::from_raw(pk.alphabet().clone(), sp.v.clone());
    let cert = cert
        .with_meta("u_m", &um)
        .with_meta("len_u", um.len())
        .with_meta("v_m", &v)
        .with_meta("b_arc_edges", barc.len())
        .with_meta("assembly", "u_m = b v_m hv_m^-1 b^-1 hv_m")
        .with_meta("arc.b", arc_text(&barc));
    Ok(Built { diagram: d, cert, arcs: vec![("b".into(), barc)] })
}

/// `[tau, X T X']` with `X = sigma^-n a1^n sigma^n`, `X' = sigma^-n a1^-n sigma^n`, `[x,y] = x^-1 y^-1 x y`.
pub fn qm_wn_word(m: usize, n: usize) -> Result<Word> {
    if m < 2 {
        return Err(Error::Param(format!("m must be at least 2, got {m}")));
    }
    let p = build_presentation(&Family::Qm { m })?;
    let sig = letter(&p, "sigma")?;
    let a1 = letter(&p, "a1")?;
    let tau = letter(&p, "tau")?;
    let tt = letter(&p, "T")?;
    let conj = |x: Letter| -> Vec<Letter> {
        let mut v = vec![sig.inverse(); n];
        v.extend(std::iter::repeat(x).take(n));
        v.extend(std::iter::repeat(sig).take(n));
        v
    };
    let mut y = conj(a1);
    y.push(tt);
    y.extend(conj(a1.inverse()));
    let mut w = vec![tau.inverse()];
    w.extend(invert_letters(&y));
    w.push(tau);
    w.extend(y);
    Word::new(p.alphabet().clone(), w)
}

pub fn qm_wn_diagram(m: usize, n: usize) -> Result<Built> {
    qm_wn_diagram_with_budget(m, n, DEFAULT_AREA_BUDGET)
}

/// Filling of the commutator word over `Qm` built from a `[tau,T]` cell, tau- and
/// T-corridors, commutation cells moving `t` across `a`, and sigma-stacks for `X`.
pub fn qm_wn_diagram_with_budget(m: usize, n: usize, budget: u64) -> Result<Built> {
    if m < 2 || n == 0 {
        return Err(Error::Param("need m >= 2 and n >= 1".into()));
    }
    let p = Arc::new(build_presentation(&Family::Qm { m })?);
    let tau = letter(&p, "tau")?;
    let tt = letter(&p, "T")?;
    let t = letter(&p, "t")?;
    let sig = letter(&p, "sigma")?;
    let am = letter(&p, &format!("a{m}"))?;
    let syms: Vec<u32> = (1..=m).map(|i| p.sym(&format!("a{i}"))).collect::<Result<_>>()?;
    let images = shift_image(&p, "a", m, m)?;
    // u = psi^n(a1)^n, positive
    let mut u = vec![letter(&p, "a1")?; n];
    for _ in 0..n {
        u = apply_image(&images, &syms, &u);
    }
    let q = u.iter().filter(|l| l.sym() == am.sym()).count();
    let ulen = u.len();
    let lt = ulen + q;
    let est = (2 * ulen + 4 * q * ulen + 2 * q + 4 * n * ulen + 1) as u128;
    budget_check(est, budget)?;
    // chunks of u_t: a_m becomes a_m t
    let chunks: Vec<Vec<Letter>> = u.iter().map(|&l| if l == am { vec![am, t] } else { vec![l] }).collect();
    let mut s = Surface::polygon(p.clone(), &[tau.inverse(), tt.inverse(), tau, tt]);
    for (pos, sign) in [(2usize, false), (0usize, true)] {
        let mut cur = s.outer_walk()[pos];
        for x in chunks.iter().rev() {
            let mut v = invert_letters(x);
            v.push(if sign { tau.inverse() } else { tau });
            v.extend_from_slice(x);
            let vd = s.cell(&[cur], &v)?;
            cur = vd[x.len()];
        }
    }
    // walk from the tau^-1 dart: tau^-1 u_t T^-1 u_t^-1 tau u_t T u_t^-1
    rotate(&mut s, lt);
    let w = s.outer_walk();
    let ut_arc: Vec<Dart> = w[1..1 + lt].to_vec();
    let is_t = |l: Letter| l.sym() == t.sym();
    for (start, fwd) in [(4 + 3 * lt, false), (3 + 2 * lt, true), (2 + lt, false), (1usize, true)] {
        let w = s.outer_walk();
        let mut arc: Vec<Dart> = w[start..start + lt].to_vec();
        bubble(&mut s, &mut arc, &is_t, fwd)?;
    }
    // walk: tau^-1 [u t^q] T^-1 [t^-q u^-1] tau [u t^q] T [t^-q u^-1]
    let is_tt = |l: Letter| l.sym() == tt.sym();
    for start in [3 + 2 * lt + ulen, 1 + ulen] {
        let w = s.outer_walk();
        let mut arc: Vec<Dart> = w[start..start + 2 * q + 1].to_vec();
        bubble(&mut s, &mut arc, &is_tt, false)?;
        // arc now reads T^e t^q t^-q; fold the t pairs
        for i in 0..q {
            let d = s.resolve(arc[q - i]);
            s.zip(d, Keep::First, Pinch::Error)?;
        }
    }
    // walk: tau^-1 u T^-1 u^-1 tau u T u^-1
    let (_, xst) = {
        let top = vec![letter(&p, "a1")?; n];
        ((), conj_stack(&p, sig, &top, n, &images, &syms)?)
    };
    let xs = xst.s;
    let mut xs_inv = xs.clone();
    xs_inv.mirror();
    rotate(&mut xs_inv, ulen);
    let w = s.outer_walk();
    let u_arcs: Vec<Vec<Dart>> = [1usize, 2 + ulen, 3 + 2 * ulen, 4 + 3 * ulen]
        .iter()
        .map(|&st| w[st..st + ulen].to_vec())
        .collect();
    for (i, st) in [(3usize, 4 + 3 * ulen), (2, 3 + 2 * ulen), (1, 2 + ulen), (0, 1usize)] {
        let other = if i % 2 == 0 { &xs } else { &xs_inv };
        let _ = glue_at(&mut s, st, ulen, other)?;
    }
    let (d, map, cert) = finish_built(&s, "qmwn", &[("m", m as i64), ("n", n as i64)])?;
    let uw = Word::from_raw(p.alphabet().clone(), u.clone());
    let ut: Vec<Letter> = chunks.concat();
    let utw = Word::from_raw(p.alphabet().clone(), ut);
    let mut arcs = vec![("u_t".to_string(), map_arc(&map, &ut_arc))];
    for (i, a) in u_arcs.iter().enumerate() {
        arcs.push((format!("u{i}"), map_arc(&map, a)));
    }
    let mut cert = cert
        .with_meta("q", q)
        .with_meta("u", &uw)
        .with_meta("u_t", &utw)
        .with_meta("commutator", "[x,y] = x^-1 y^-1 x y");
    for (name, a) in &arcs {
        cert = cert.with_meta(&format!("arc.{name}"), arc_text(a));
    }
    Ok(Built { diagram: d, cert, arcs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wn_small() {
        assert!(wn_word(2, 0).unwrap().is_empty());
        assert_eq!(wn_word(2, 1).unwrap().to_string(), "s1 s2");
        let w = wn_word(3, 2).unwrap();
        let counts: Vec<usize> = (1..=3).map(|i| w.letter_count(&s_name(i)).unwrap()).collect();
        assert_eq!(counts, vec![2, 4, 2]);
    }

    #[test]
    fn d2_boundary() {
        let b = dn_diagram(2, 2).unwrap();
        assert!(b.diagram.is_valid(), "{}", b.diagram.validate());
        let expect = format!("f^-1 f^-1 s1 s1 f f {}", wn_word(2, 2).unwrap().inverse());
        assert_eq!(b.diagram.boundary_word().to_string(), expect);
        assert_eq!(wn_word(2, 2).unwrap().len(), 6);
        assert_eq!(b.diagram.boundary_word().len(), 12);
    }

    #[test]
    fn least_n_examples() {
        assert_eq!(least_n(2, 1), 1);
        assert_eq!(least_n(2, 4), 2);
        assert_eq!(least_n(3, 10), 4);
    }

    #[test]
    fn sigma_small() {
        for k in 2..=3 {
            for m in 1..=12 {
                let b = sigma_m_diagram(k, m).unwrap();
                assert!(b.diagram.is_valid(), "k={k} m={m}: {}", b.diagram.validate());
                let v = b.word("v_m").unwrap();
                assert!(v.len() <= 8 * least_n(k, m), "k={k} m={m} v={v}");
                let sk = b.diagram.presentation().word(&format!("s{k}^{m}")).unwrap();
                assert_eq!(b.diagram.boundary_word(), sk.concat(&v.inverse()).unwrap());
            }
        }
    }

    #[test]
    fn bpower_small() {
        let b = bpower_stack(2, 1, false).unwrap();
        assert!(b.diagram.is_valid(), "{}", b.diagram.validate());
        assert_eq!(b.diagram.boundary_word().to_string(), "t^-1 b s2 b^-1 b^-1 b^-1");
        let b = bpower_stack(2, 3, false).unwrap();
        assert!(b.diagram.is_valid());
        assert_eq!(b.arc("top").unwrap().len(), 27);
        let h = bpower_stack(2, 2, true).unwrap();
        assert!(h.diagram.is_valid(), "{}", h.diagram.validate());
        assert_eq!(h.arc("top").unwrap().len(), 9);
    }

    #[test]
    fn delta_small() {
        for m in 1..=4 {
            let b = delta_m_diagram(2, m).unwrap();
            assert!(b.diagram.is_valid(), "m={m}: {}", b.diagram.validate());
            let u = b.word("u_m").unwrap();
            let tm = b.diagram.presentation().word(&format!("t^{m}")).unwrap();
            assert_eq!(b.diagram.boundary_word(), tm.concat(&u.inverse()).unwrap());
            assert_eq!(b.arc("b").unwrap().len(), 3usize.pow(m as u32));
        }
    }

    #[test]
    fn qm_small() {
        assert_eq!(qm_wn_word(2, 1).unwrap().len(), 16);
        for (m, n, q) in [(2, 2, 4), (3, 2, 2), (2, 1, 1)] {
            let b = qm_wn_diagram(m, n).unwrap();
            assert!(b.diagram.is_valid(), "m={m} n={n}: {}", b.diagram.validate());
            assert_eq!(b.diagram.boundary_word(), qm_wn_word(m, n).unwrap());
            assert_eq!(b.cert.get_meta("q").unwrap(), q.to_string());
        }
    }
}
