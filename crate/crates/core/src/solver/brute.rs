//! Enumeration oracle. Shares nothing with the search engine beyond the
//! input types.

use super::{requirements, Assumption, ColorSpec, Coloring, SolveError, Verdict};
use crate::graph::Graph;

/// Largest number of candidate colorings the oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: f64 = 1e8;

pub fn brute_force_solve(g: &Graph, spec: &ColorSpec, assumptions: &[Assumption]) -> Result<Verdict, SolveError> {
    let mut found = None;
    enumerate(g, spec, assumptions, |c| {
        found = Some(c);
        false
    })?;
    Ok(found.map_or(Verdict::Unsat, Verdict::Sat))
}

/// Every valid coloring extending `assumptions`, in lexicographic order of
/// the color vector over ascending vertex ids.
pub fn brute_force_solutions(
    g: &Graph,
    spec: &ColorSpec,
    assumptions: &[Assumption],
) -> Result<Vec<Coloring>, SolveError> {
    let mut all = Vec::new();
    enumerate(g, spec, assumptions, |c| {
        all.push(c);
        true
    })?;
    Ok(all)
}

fn enumerate(
    g: &Graph,
    spec: &ColorSpec,
    assumptions: &[Assumption],
    mut visit: impl FnMut(Coloring) -> bool,
) -> Result<(), SolveError> {
    let reqs = requirements(g, spec, assumptions)?;
    let ids: Vec<_> = g.vertices().collect();
    let n = ids.len();
    let pos = |v| ids.binary_search(&v).unwrap();
    let l = spec.classes();
    let mut fixed = vec![None; n];
    let mut bound: Vec<Option<u32>> = vec![None; n];
    for r in &reqs {
        fixed[pos(r.vertex)] = Some(r.color);
        bound[pos(r.vertex)] = Some(r.max_same);
    }
    let free: Vec<usize> = (0..n).filter(|&i| fixed[i].is_none()).collect();
    let candidates = (l as f64).powi(free.len() as i32);
    if candidates > BRUTE_FORCE_LIMIT {
        return Err(SolveError::TooLarge(candidates));
    }
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (pos(u), pos(v))).collect();
    let mut col: Vec<usize> = fixed.iter().map(|f| f.unwrap_or(0)).collect();
    let mut defect = vec![0u32; n];
    loop {
        defect.iter_mut().for_each(|d| *d = 0);
        for &(u, v) in &edges {
            if col[u] == col[v] {
                defect[u] += 1;
                defect[v] += 1;
            }
        }
        let ok = (0..n).all(|i| defect[i] <= spec.defect(col[i]) && bound[i].is_none_or(|b| defect[i] <= b));
        if ok {
            let c = Coloring(ids.iter().zip(&col).map(|(&v, &c)| (v, c)).collect());
            if !visit(c) {
                return Ok(());
            }
        }
        // odometer over the free vertices, last vertex fastest
        let mut k = free.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            let i = free[k];
            col[i] += 1;
            if col[i] < l {
                break;
            }
            col[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn spec(s: &str) -> ColorSpec {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(brute_force_solve(&cycle(5), &spec("0,0"), &[]).unwrap(), Verdict::Unsat);
        assert!(brute_force_solve(&cycle(5), &spec("1,0"), &[]).unwrap().is_sat());
        assert!(brute_force_solve(&path(3), &spec("0,0"), &[]).unwrap().is_sat());
    }

    #[test]
    fn counts_colorings() {
        // proper 3-colorings of C5: (k-1)^n + (-1)^n (k-1) = 32 - 2
        assert_eq!(brute_force_solutions(&cycle(5), &spec("0,0,0"), &[]).unwrap().len(), 30);
        // every 2-coloring of K2 with one class allowing defect 1
        assert_eq!(brute_force_solutions(&path(2), &spec("1,0"), &[]).unwrap().len(), 3);
    }

    #[test]
    fn guard() {
        assert!(matches!(
            brute_force_solve(&empty(30), &spec("0,0,0"), &[]),
            Err(SolveError::TooLarge(_))
        ));
    }
}
