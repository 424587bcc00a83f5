//! Exact word-metric distances by breadth-first search over normal forms.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::models::{GroupElement, GroupModel};
use crate::word::Word;

pub const DEFAULT_CAP: u32 = 12;
const DEFAULT_BUDGET_MB: usize = 2048;
const ENTRY_OVERHEAD: usize = 48;

/// Memory budget for ball searches, from `FILLSCOPE_BUDGET_MB` or 2 GiB.
pub fn budget_bytes() -> usize {
    std::env::var("FILLSCOPE_BUDGET_MB")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(DEFAULT_BUDGET_MB)
        .saturating_mul(1 << 20)
}

struct Tally {
    used: usize,
    budget: usize,
}

impl Tally {
    fn add(&mut self, e: &GroupElement, radius: u32) -> Result<()> {
        self.used += e.approx_bytes() + ENTRY_OVERHEAD;
        if self.used > self.budget {
            return Err(Error::Resource(format!(
                "ball search exceeded {} MiB at radius {radius}",
                self.budget >> 20
            )));
        }
        Ok(())
    }
}

/// The ball of radius `r` with exact distances.
pub fn cayley_ball(model: &GroupModel, r: u32) -> Result<HashMap<GroupElement, u32>> {
    cayley_ball_with_budget(model, r, budget_bytes())
}

pub fn cayley_ball_with_budget(model: &GroupModel, r: u32, budget: usize) -> Result<HashMap<GroupElement, u32>> {
    let gens = model.signed_generators();
    let mut tally = Tally { used: 0, budget };
    let mut dist = HashMap::new();
    let id = model.identity();
    tally.add(&id, 0)?;
    dist.insert(id.clone(), 0);
    let mut frontier = vec![id];
    for d in 1..=r {
        let mut next = Vec::new();
        for e in &frontier {
            for &g in &gens {
                let mut x = e.clone();
                model.step(&mut x, g);
                if !dist.contains_key(&x) {
                    tally.add(&x, d - 1)?;
                    dist.insert(x.clone(), d);
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    Ok(dist)
}

/// Exact distance from the identity to the element of `w`, or `None` beyond `cap`.
pub fn cayley_distance(model: &GroupModel, w: &Word, cap: u32) -> Result<Option<u32>> {
    let target = model.eval(w)?;
    distance_to(model, &target, cap)
}

pub fn distance_to(model: &GroupModel, target: &GroupElement, cap: u32) -> Result<Option<u32>> {
    let id = model.identity();
    if *target == id {
        return Ok(Some(0));
    }
    let gens = model.signed_generators();
    let mut tally = Tally { used: 0, budget: budget_bytes() };
    let mut seen = [HashMap::new(), HashMap::new()];
    let mut frontier = [vec![id.clone()], vec![target.clone()]];
    let mut radius = [0u32, 0u32];
    seen[0].insert(id, 0u32);
    seen[1].insert(target.clone(), 0u32);
    while radius[0] + radius[1] < cap {
        let side = if frontier[0].len() <= frontier[1].len() { 0 } else { 1 };
        let other = 1 - side;
        if frontier[side].is_empty() {
            return Ok(None);
        }
        let mut best: Option<u32> = None;
        let mut next = Vec::new();
        for e in &frontier[side] {
            for &g in &gens {
                let mut x = e.clone();
                model.step(&mut x, g);
                if let Some(&d) = seen[other].get(&x) {
                    let total = radius[side] + 1 + d;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                if !seen[side].contains_key(&x) {
                    tally.add(&x, radius[0] + radius[1])?;
                    seen[side].insert(x.clone(), radius[side] + 1);
                    next.push(x);
                }
            }
        }
        if let Some(b) = best {
            return Ok(if b <= cap { Some(b) } else { None });
        }
        frontier[side] = next;
        radius[side] += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{build_presentation, Family};

    #[test]
    fn small_balls() {
        let free = GroupModel::free(2).unwrap();
        assert_eq!(cayley_ball(&free, 0).unwrap().len(), 1);
        assert_eq!(cayley_ball(&free, 2).unwrap().len(), 17);
        let theta = GroupModel::theta(2).unwrap();
        assert_eq!(cayley_ball(&theta, 1).unwrap().len(), 9);
    }

    #[test]
    fn distances() {
        let theta = GroupModel::theta(2).unwrap();
        let p = build_presentation(&Family::Ok { k: 2 }).unwrap();
        assert_eq!(cayley_distance(&theta, &p.word("1").unwrap(), 5).unwrap(), Some(0));
        assert_eq!(cayley_distance(&theta, &p.word("f^-1 s1 f").unwrap(), 5).unwrap(), Some(2));
        let ab = GroupModel::free_abelian(2).unwrap();
        let w = Word::parse(ab.alphabet(), "s1^3 s2^4").unwrap();
        assert_eq!(cayley_distance(&ab, &w, 12).unwrap(), Some(7));
        assert_eq!(cayley_distance(&ab, &w, 6).unwrap(), None);
    }
}
