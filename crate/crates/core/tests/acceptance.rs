//! The nine acceptance criteria, one PASS/FAIL line each.

mod common;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;
use std::time::Instant;

use fillscope::cayley::{cayley_distance, DEFAULT_CAP};
use fillscope::constructions::{
    delta_m_diagram, dn_diagram, least_n, qm_wn_diagram, sigma_m_diagram, bpower_stack, wn_word,
};
use fillscope::corridors::{extended_skt_corridors, trace_corridors};
use fillscope::diagram::{fold, lollipop};
use fillscope::metrics::{
    distortion_bound_theta, ediam_exact, ediam_lower_retraction, matrix_power, t_distortion_bound, MatrixKind,
};
use fillscope::models::{ActionMatrix, GroupElement, GroupModel};
use fillscope::presentation::Retraction;
use fillscope::word::reduce_letters;
use fillscope::{build_presentation, retraction, Diagram, Family, Letter, Word};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pascal(n: usize) -> Vec<Vec<u128>> {
    let mut t = vec![vec![0u128; n + 1]; n + 1];
    for a in 0..=n {
        t[a][0] = 1;
        for b in 1..=a {
            t[a][b] = t[a - 1][b - 1] + if b < a { t[a - 1][b] } else { 0 };
        }
    }
    t
}

fn c1_shortcut_length() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 2..=3 {
        for m in 1..=200 {
            let b = sigma_m_diagram(k, m).map_err(|e| format!("k={k} m={m}: {e}"))?;
            check(b.diagram.is_valid(), || format!("k={k} m={m}: {}", b.diagram.validate()))?;
            // least n by direct search with an independent binomial table
            let t = pascal(64);
            let n = (1..64).find(|&n| n as u128 * t[n][k - 1] >= m as u128).unwrap();
            check(least_n(k, m) == n, || format!("least n for k={k} m={m}: {} vs {n}", least_n(k, m)))?;
            let v = b.word("v_m").map_err(|e| e.to_string())?;
            check(v.len() <= 8 * n, || format!("k={k} m={m}: |v_m| = {} > 8n = {}", v.len(), 8 * n))?;
            let sk = b.diagram.presentation().word(&format!("s{k}^{m}")).unwrap();
            check(b.diagram.boundary_word() == sk.concat(&v.inverse()).unwrap(), || {
                format!("k={k} m={m}: boundary {}", b.diagram.boundary_word())
            })?;
            worst = worst.max(v.len() as f64 / (8 * n) as f64);
        }
    }
    let el = start.elapsed().as_secs_f64();
    check(el < 60.0, || format!("took {el:.1}s"))?;
    Ok(format!("400 diagrams, max |v_m|/8n = {worst:.2}, {el:.1}s"))
}

fn interior_path(d: &Diagram, arc: &[u32], label: u32) -> Result<(), String> {
    let fi = d.faces();
    for (i, &x) in arc.iter().enumerate() {
        check(d.label(x).sym() == label, || format!("arc dart {i} has the wrong label"))?;
        for y in [x, x ^ 1] {
            check(!fi.is_outer(fi.face_of[y as usize]), || format!("arc dart {i} touches the outer face"))?;
        }
        if i > 0 {
            check(d.head(arc[i - 1]) == d.tail(x), || format!("arc breaks at {i}"))?;
        }
    }
    Ok(())
}

fn c2_shortcut_diagram() -> Outcome {
    let start = Instant::now();
    let mut pts = Vec::new();
    for m in 1..=10usize {
        let b = delta_m_diagram(2, m).map_err(|e| format!("m={m}: {e}"))?;
        let d = &b.diagram;
        check(d.is_valid(), || format!("m={m}: {}", d.validate()))?;
        let u = b.word("u_m").map_err(|e| e.to_string())?;
        let tm = d.presentation().word(&format!("t^{m}")).unwrap();
        let want = tm.concat(&u.inverse()).unwrap();
        check(d.boundary_word().free_reduce() == want.free_reduce(), || format!("m={m}: boundary mismatch"))?;
        let arc = b.arc("b").unwrap();
        check(arc.len() == 3usize.pow(m as u32), || format!("m={m}: b-arc has {} edges", arc.len()))?;
        interior_path(d, arc, d.presentation().sym("b").unwrap()).map_err(|e| format!("m={m}: {e}"))?;
        if m >= 3 {
            pts.push((m as f64, d.idiam() as f64));
        }
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let a = sxy / sxx;
    let b0 = my - a * mx;
    let worst = pts.iter().map(|p| ((p.1 - (a * p.0 + b0)) / p.1).abs()).fold(0.0, f64::max);
    check(worst < 0.2, || format!("idiam fit a={a:.2} b={b0:.2} worst residual {worst:.3}"))?;
    let el = start.elapsed().as_secs_f64();
    check(el < 120.0, || format!("took {el:.1}s"))?;
    Ok(format!("idiam ~ {a:.2} m + {b0:.2}, worst relative residual {worst:.3}, {el:.1}s"))
}

/// Rewrites innermost `f^-1 x f` blocks with the substitution rule until no `f` remains.
fn rewrite_oracle(k: usize, n: usize) -> Vec<usize> {
    // tokens: 0 = f^-1, 1 = f, i+2 = s_{i+1}
    let mut w: Vec<usize> = Vec::new();
    w.extend(std::iter::repeat(0).take(n));
    w.extend(std::iter::repeat(2).take(n));
    w.extend(std::iter::repeat(1).take(n));
    loop {
        let Some(close) = w.iter().position(|&x| x == 1) else { break };
        let open = w[..close].iter().rposition(|&x| x == 0).unwrap();
        let mut mid = Vec::new();
        for &x in &w[open + 1..close] {
            let i = x - 2;
            mid.push(x);
            if i + 1 < k {
                mid.push(x + 1);
            }
        }
        w.splice(open..=close, mid);
    }
    (0..k).map(|i| w.iter().filter(|&&x| x == i + 2).count()).collect()
}

fn c3_binomial_machinery() -> Outcome {
    let start = Instant::now();
    let t = pascal(40);
    for k in 2..=5 {
        for n in 0..=12 {
            let w = wn_word(k, n).map_err(|e| e.to_string())?;
            let got: Vec<usize> = (1..=k).map(|i| w.letter_count(&format!("s{i}")).unwrap()).collect();
            let oracle = rewrite_oracle(k, n);
            check(got == oracle, || format!("k={k} n={n}: {got:?} vs oracle {oracle:?}"))?;
            for i in 1..=k {
                let want = n as u128 * t[n][i - 1];
                check(got[i - 1] as u128 == want, || format!("k={k} n={n} i={i}: {} vs {want}", got[i - 1]))?;
            }
        }
    }
    for k in 1..=6 {
        for kind in [MatrixKind::SubdiagonalUnipotent, MatrixKind::LowerTriangularOnes] {
            let base = kind.base(k);
            let mut acc = ActionMatrix::identity(k);
            for n in 0..=20u32 {
                check(matrix_power(kind, k, n) == acc, || format!("{kind:?} k={k} n={n}"))?;
                acc = acc.mul(&base);
            }
        }
    }
    let el = start.elapsed().as_secs_f64();
    check(el < 5.0, || format!("took {el:.1}s"))?;
    Ok(format!("w_n counts for k<=5 n<=12 and matrix powers k<=6 n<=20 exact, {el:.2}s"))
}

fn c4_distortion_soundness() -> Outcome {
    let p = Arc::new(build_presentation(&Family::Ok { k: 2 }).unwrap());
    let model = GroupModel::theta(2).unwrap();
    let mut rng = common::rng(4);
    let a = p.alphabet().clone();
    for trial in 0..100 {
        let m: i64 = rng.gen_range(-20..=20);
        let s2 = Letter::pos(p.sym("s2").unwrap());
        let mut w: Vec<Letter> = vec![if m >= 0 { s2 } else { s2.inverse() }; m.unsigned_abs() as usize];
        for _ in 0..rng.gen_range(1..=6) {
            if rng.gen_bool(0.5) {
                let r = common::random_relator_conjugate(&mut rng, &p);
                let at = rng.gen_range(0..=w.len());
                w.splice(at..at, r);
            } else {
                let x = common::random_letters(&mut rng, a.len(), 1)[0];
                w.insert(0, x.inverse());
                w.push(x);
            }
        }
        let w = reduce_letters(&w);
        let u0 = Word::new(a.clone(), w).unwrap();
        let got = model.is_power_of(&u0, "s2").map_err(|e| e.to_string())?;
        check(got == Some(m), || format!("trial {trial}: {u0} evaluates to {got:?}, expected s2^{m}"))?;
        let bound = distortion_bound_theta(2, &u0).map_err(|e| format!("trial {trial}: {e}"))?;
        check(m.unsigned_abs() as u128 <= bound, || format!("trial {trial}: |m|={m} > bound {bound} for {u0}"))?;
    }
    for m in 1..=10 {
        let b = delta_m_diagram(2, m).map_err(|e| e.to_string())?;
        let u = b.word("u_m").map_err(|e| e.to_string())?;
        let bound = t_distortion_bound(2, &u).map_err(|e| e.to_string())?;
        check(m as u128 <= bound, || format!("m={m}: t bound {bound}"))?;
    }
    Ok("100 random words and u_1..u_10 within their bounds".into())
}

fn c5_corridor_partition() -> Outcome {
    let mut checked = 0;
    let mut rng = common::rng(5);
    let cases = common::hypothesis_cases();
    for i in 0..200 {
        let (p, names) = &cases[i % cases.len()];
        let d = common::random_diagram(&mut rng, p);
        check(d.is_valid(), || format!("random diagram {i} invalid"))?;
        let rep = trace_corridors(&d, &common::syms(p, names), false).map_err(|e| format!("case {i}: {e}"))?;
        rep.check_partition(&d).map_err(|e| format!("random {i}: {e}"))?;
        checked += 1;
    }
    let ok2 = |d: &Diagram, names: &[&str], extended: bool| -> Result<(), String> {
        let rep = trace_corridors(d, &common::syms(d.presentation(), names), extended).map_err(|e| e.to_string())?;
        rep.check_partition(d).map_err(|e| e.to_string())
    };
    for n in 1..=4 {
        let d = dn_diagram(2, n).map_err(|e| e.to_string())?.diagram;
        ok2(&d, &["f"], false)?;
        checked += 1;
    }
    for m in [1, 5, 17] {
        let d = sigma_m_diagram(2, m).map_err(|e| e.to_string())?.diagram;
        ok2(&d, &["f"], false)?;
        ok2(&d, &["g"], false)?;
        checked += 2;
    }
    for m in 1..=4 {
        for hatted in [false, true] {
            let d = bpower_stack(2, m, hatted).map_err(|e| e.to_string())?.diagram;
            extended_skt_corridors(&d).map_err(|e| e.to_string())?.check_partition(&d).map_err(|e| e.to_string())?;
            checked += 1;
        }
        let d = delta_m_diagram(2, m).map_err(|e| e.to_string())?.diagram;
        extended_skt_corridors(&d).map_err(|e| e.to_string())?.check_partition(&d).map_err(|e| e.to_string())?;
        checked += 1;
    }
    for n in 1..=3 {
        let d = qm_wn_diagram(2, n).map_err(|e| e.to_string())?.diagram;
        ok2(&d, &["t"], false)?;
        ok2(&d, &["tau"], false)?;
        checked += 2;
    }
    Ok(format!("{checked} partitions exact"))
}

fn c6_retraction_lower_bound() -> Outcome {
    let mut seen = Vec::new();
    for n in 2..=6usize {
        let b = qm_wn_diagram(2, n).map_err(|e| e.to_string())?;
        let d = &b.diagram;
        check(d.is_valid(), || format!("n={n}: {}", d.validate()))?;
        let q: usize = b.cert.get_meta("q").unwrap().parse().unwrap();
        check(q == n * n, || format!("n={n}: certificate q={q}"))?;
        let r = retraction("phi_t", d.presentation().clone()).map_err(|e| e.to_string())?;
        let (low, _) = ediam_lower_retraction(d, &r).map_err(|e| e.to_string())?;
        check(low >= q as u64, || format!("n={n}: lower bound {low} < q={q}"))?;
        seen.push(low);
    }
    Ok(format!("phi_t lower bounds {seen:?}"))
}

fn c7_fold_lollipop() -> Outcome {
    let p = Arc::new(build_presentation(&Family::Ok { k: 2 }).unwrap());
    let mut rng = common::rng(7);
    for i in 0..100 {
        let s = common::random_scheme(&mut rng, &p, 4, 3);
        let lol = lollipop(p.clone(), &s).map_err(|e| format!("scheme {i}: {e}"))?;
        let f = fold(&lol).map_err(|e| format!("scheme {i}: {e}"))?;
        check(f.is_valid(), || format!("scheme {i}: {}", f.validate()))?;
        check(f.boundary_word().freely_equal(&s.target), || format!("scheme {i}: boundary differs"))?;
        check(f.idiam() <= lol.idiam(), || format!("scheme {i}: idiam grew {} -> {}", lol.idiam(), f.idiam()))?;
    }
    Ok("100 schemes folded".into())
}

fn c8_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let model = GroupModel::theta(2).unwrap();
    let gens = model.signed_generators();
    let mut dist: HashMap<GroupElement, u32> = HashMap::new();
    let mut word: HashMap<GroupElement, Vec<Letter>> = HashMap::new();
    let id = model.identity();
    dist.insert(id.clone(), 0);
    word.insert(id.clone(), Vec::new());
    let mut q = VecDeque::from([id]);
    while let Some(e) = q.pop_front() {
        let d = dist[&e];
        if d == 4 {
            continue;
        }
        for &g in &gens {
            let mut x = e.clone();
            model.step(&mut x, g);
            if !dist.contains_key(&x) {
                dist.insert(x.clone(), d + 1);
                let mut w = word[&e].clone();
                w.push(g);
                word.insert(x.clone(), w);
                q.push_back(x);
            }
        }
    }
    let a = model.alphabet().clone();
    for (e, &d) in &dist {
        let w = Word::new(a.clone(), word[e].clone()).unwrap();
        let got = cayley_distance(&model, &w, DEFAULT_CAP).map_err(|e| e.to_string())?;
        check(got == Some(d), || format!("{w}: bidirectional {got:?} vs breadth-first {d}"))?;
    }
    let el = start.elapsed().as_secs_f64();
    check(el < 60.0, || format!("took {el:.1}s"))?;
    Ok(format!("{} elements agree, {el:.1}s", dist.len()))
}

fn c9_sandwich() -> Outcome {
    let p = Arc::new(build_presentation(&Family::Ok { k: 2 }).unwrap());
    let model = GroupModel::theta(2).unwrap();
    let rets: Vec<Retraction> = ["phi_f", "phi_g"].iter().map(|r| retraction(r, p.clone()).unwrap()).collect();
    let mut diagrams: Vec<Diagram> = Vec::new();
    for n in 1..=3 {
        diagrams.push(dn_diagram(2, n).map_err(|e| e.to_string())?.diagram);
    }
    for m in 1..=6 {
        diagrams.push(sigma_m_diagram(2, m).map_err(|e| e.to_string())?.diagram);
    }
    let mut rng = common::rng(9);
    for _ in 0..100 {
        diagrams.push(common::random_diagram(&mut rng, &p));
    }
    for (i, d) in diagrams.iter().enumerate() {
        let idiam = d.idiam();
        let (exact, _) = ediam_exact(d, &model, idiam).map_err(|e| format!("diagram {i}: {e}"))?;
        for r in &rets {
            let (low, _) = ediam_lower_retraction(d, r).map_err(|e| e.to_string())?;
            check(low <= exact as u64, || format!("diagram {i}: {} {low} > exact {exact}", r.name))?;
        }
        check(exact <= idiam, || format!("diagram {i}: exact {exact} > idiam {idiam}"))?;
    }
    Ok(format!("{} diagrams sandwiched", diagrams.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 shortcut length", c1_shortcut_length),
        ("2 shortcut diagram", c2_shortcut_diagram),
        ("3 binomial machinery", c3_binomial_machinery),
        ("4 distortion soundness", c4_distortion_soundness),
        ("5 corridor partition", c5_corridor_partition),
        ("6 retraction lower bound", c6_retraction_lower_bound),
        ("7 folding and lollipops", c7_fold_lollipop),
        ("8 oracle equivalence", c8_oracle_equivalence),
        ("9 sandwich inequality", c9_sandwich),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
