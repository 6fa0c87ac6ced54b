#![allow(dead_code)]

use fairnav_core::{CityMap, Coord};

/// Path invariant checker written against the raw map, sharing no code
/// with `Path::validate`.
pub fn check_tour(map: &CityMap, steps: &[Coord], budget: usize) -> Result<(), String> {
    let base = map.base();
    if steps.is_empty() {
        return Err("empty".into());
    }
    if steps[0] != base || steps[steps.len() - 1] != base {
        return Err(format!("not closed at base: {:?} .. {:?}", steps[0], steps[steps.len() - 1]));
    }
    if steps.len() - 1 > budget {
        return Err(format!("{} moves > budget {budget}", steps.len() - 1));
    }
    for s in steps {
        if s.x >= map.width() || s.y >= map.height() {
            return Err(format!("{s:?} out of bounds"));
        }
        if !map.cells()[s.y * map.width() + s.x].traversable {
            return Err(format!("{s:?} blocked"));
        }
    }
    for w in steps.windows(2) {
        let dx = (w[0].x as i64 - w[1].x as i64).abs();
        let dy = (w[0].y as i64 - w[1].y as i64).abs();
        if dx + dy != 1 {
            return Err(format!("{:?} -> {:?} not 4-adjacent", w[0], w[1]));
        }
    }
    Ok(())
}

/// Every closed walk from base with at most `budget` moves, by plain
/// recursion (no pruning beyond the move count).
pub fn all_tours(map: &CityMap, budget: usize) -> Vec<Vec<Coord>> {
    fn go(map: &CityMap, budget: usize, walk: &mut Vec<Coord>, out: &mut Vec<Vec<Coord>>) {
        let cur = *walk.last().unwrap();
        if cur == map.base() {
            out.push(walk.clone());
        }
        if walk.len() - 1 == budget {
            return;
        }
        let moves: [(i64, i64); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];
        for (dx, dy) in moves {
            let (x, y) = (cur.x as i64 + dx, cur.y as i64 + dy);
            if x < 0 || y < 0 || x >= map.width() as i64 || y >= map.height() as i64 {
                continue;
            }
            let n = Coord::new(x as usize, y as usize);
            if !map.cells()[n.y * map.width() + n.x].traversable {
                continue;
            }
            walk.push(n);
            go(map, budget, walk, out);
            walk.pop();
        }
    }
    let mut out = Vec::new();
    go(map, budget, &mut vec![map.base()], &mut out);
    out
}

/// Per-category people on the visited cells (radius 0), each cell once.
pub fn found_counts(map: &CityMap, attribute: usize, steps: &[Coord]) -> Vec<u64> {
    let mut seen = vec![false; map.width() * map.height()];
    let mut found = vec![0u64; map.attributes()[attribute].categories.len()];
    for s in steps {
        let i = s.y * map.width() + s.x;
        if !seen[i] {
            seen[i] = true;
            for (f, n) in found.iter_mut().zip(&map.cells()[i].counts[attribute]) {
                *f += n;
            }
        }
    }
    found
}

/// Jensen-Shannon distance computed with natural logs and converted, as an
/// independent reference.
pub fn js_reference(p: &[f64], q: &[f64]) -> f64 {
    let kl = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .filter(|(x, _)| **x > 0.0)
            .map(|(x, y)| x * (x / y).ln())
            .sum::<f64>()
    };
    let m: Vec<f64> = p.iter().zip(q).map(|(a, b)| (a + b) / 2.0).collect();
    ((kl(p, &m) + kl(q, &m)) / 2.0 / std::f64::consts::LN_2).max(0.0).sqrt()
}
