//! DOT and SVG drawings of diagrams with optional corridor bands.

use std::fmt::Write;

use crate::corridors::CorridorReport;
use crate::diagram::{opp, Diagram};

const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

fn edge_colors(d: &Diagram, corridors: Option<&CorridorReport>) -> Vec<Option<usize>> {
    let mut col = vec![None; d.edge_count()];
    if let Some(r) = corridors {
        for (i, c) in r.corridors.iter().enumerate() {
            for &e in &c.edges {
                col[e as usize] = Some(i);
            }
        }
        let n = r.corridors.len();
        for (i, ring) in r.rings.iter().enumerate() {
            for &e in &ring.edges {
                col[e as usize] = Some(n + i);
            }
        }
    }
    col
}

pub fn to_dot(d: &Diagram, corridors: Option<&CorridorReport>) -> String {
    let a = d.presentation().alphabet();
    let col = edge_colors(d, corridors);
    let mut s = String::from("digraph diagram {\n  node [shape=point];\n");
    let _ = writeln!(s, "  v{} [shape=circle, label=\"base\", width=0.3];", d.base());
    for v in 0..d.vertex_count() as u32 {
        if v != d.base() {
            let _ = writeln!(s, "  v{v};");
        }
    }
    for e in 0..d.edge_count() as u32 {
        let (from, to, l) = d.edge(e);
        let color = match col[e as usize] {
            Some(i) => format!(", color=\"{}\", penwidth=2", PALETTE[i % PALETTE.len()]),
            None => String::new(),
        };
        let _ = writeln!(s, "  v{from} -> v{to} [label=\"{}\"{color}];", a.name(l.sym()));
    }
    s.push_str("}\n");
    s
}

/// Layered layout: rows by distance from the base, evenly spaced within each row.
fn layout(d: &Diagram) -> Vec<(f64, f64)> {
    let t = d.bfs_tree();
    let depth = t.dist.iter().copied().filter(|&x| x != u32::MAX).max().unwrap_or(0) as usize;
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); depth + 1];
    for &v in &t.order {
        rows[t.dist[v as usize] as usize].push(v);
    }
    let width = rows.iter().map(|r| r.len()).max().unwrap_or(1).max(1) as f64;
    let mut pos = vec![(0.0, 0.0); d.vertex_count()];
    for (y, row) in rows.iter().enumerate() {
        let n = row.len() as f64;
        for (i, &v) in row.iter().enumerate() {
            let x = (i as f64 + 0.5) * width / n;
            pos[v as usize] = (40.0 + 60.0 * x, 40.0 + 60.0 * y as f64);
        }
    }
    pos
}

pub fn to_svg(d: &Diagram, corridors: Option<&CorridorReport>) -> String {
    let a = d.presentation().alphabet();
    let pos = layout(d);
    let w = pos.iter().map(|p| p.0).fold(0.0, f64::max) + 40.0;
    let h = pos.iter().map(|p| p.1).fold(0.0, f64::max) + 40.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">"
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    if let Some(r) = corridors {
        let fi = d.faces();
        let centre = |f: u32| {
            let cyc = &fi.cycles[f as usize];
            let (sx, sy) = cyc.iter().fold((0.0, 0.0), |acc, &x| {
                let p = pos[d.tail(x) as usize];
                (acc.0 + p.0, acc.1 + p.1)
            });
            (sx / cyc.len() as f64, sy / cyc.len() as f64)
        };
        let mid = |e: u32| {
            let (p, q) = (pos[d.tail(2 * e) as usize], pos[d.tail(opp(2 * e)) as usize]);
            ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0)
        };
        let bands = r
            .corridors
            .iter()
            .map(|c| (&c.edges, &c.cells, false))
            .chain(r.rings.iter().map(|g| (&g.edges, &g.cells, true)));
        for (i, (edges, cells, closed)) in bands.enumerate() {
            let mut pts = Vec::new();
            for (j, &e) in edges.iter().enumerate() {
                pts.push(mid(e));
                if let Some(&c) = cells.get(j) {
                    pts.push(centre(c));
                }
            }
            if closed {
                pts.push(pts[0]);
            }
            let list: Vec<String> = pts.iter().map(|p| format!("{:.1},{:.1}", p.0, p.1)).collect();
            let _ = writeln!(
                s,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-opacity=\"0.35\" stroke-width=\"10\"/>",
                list.join(" "),
                PALETTE[i % PALETTE.len()]
            );
        }
    }
    let col = edge_colors(d, corridors);
    for e in 0..d.edge_count() as u32 {
        let (from, to, l) = d.edge(e);
        let (p, q) = (pos[from as usize], pos[to as usize]);
        let stroke = col[e as usize].map_or("#444444", |i| PALETTE[i % PALETTE.len()]);
        let _ = writeln!(
            s,
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{stroke}\" stroke-width=\"1.5\"/>",
            p.0, p.1, q.0, q.1
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" fill=\"#222222\">{}</text>",
            (p.0 + q.0) / 2.0 + 3.0,
            (p.1 + q.1) / 2.0 - 3.0,
            a.name(l.sym())
        );
    }
    for (v, p) in pos.iter().enumerate() {
        let r = if v as u32 == d.base() { 5.0 } else { 2.5 };
        let _ = writeln!(s, "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"{r}\" fill=\"black\"/>", p.0, p.1);
    }
    s.push_str("</svg>\n");
    s
}
