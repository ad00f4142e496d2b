//! Two independent ways to decide whether one cop wins on a small graph.

use thiserror::Error;

use super::smallgraph::SmallGraph;

pub const MAX_SOLVER_N: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("DisconnectedInput: the graph is not connected")]
    DisconnectedInput,
    #[error("graph has {0} vertices; the solver handles at most {MAX_SOLVER_N}")]
    TooLarge(usize),
}

/// Repeatedly removes a vertex whose closed neighborhood is contained in
/// another's; true iff one vertex remains.
pub fn is_dismantlable(g: &SmallGraph) -> bool {
    let n = g.n();
    if n <= 1 {
        return true;
    }
    let words = g.words();
    let mut alive = vec![0u64; words];
    for v in 0..n {
        alive[v / 64] |= 1 << (v % 64);
    }
    let closed = |u: usize, alive: &[u64]| -> Vec<u64> {
        let mut row = g.row(u).to_vec();
        row[u / 64] |= 1 << (u % 64);
        row.iter_mut().zip(alive).for_each(|(w, a)| *w &= a);
        row
    };
    let is_alive = |alive: &[u64], v: usize| alive[v / 64] >> (v % 64) & 1 == 1;
    let mut left = n;
    while left > 1 {
        let dominated = (0..n).filter(|&u| is_alive(&alive, u)).find(|&u| {
            let nu = closed(u, &alive);
            g.neighbors(u).filter(|&v| is_alive(&alive, v)).any(|v| {
                let nv = closed(v, &alive);
                nu.iter().zip(&nv).all(|(a, b)| a & !b == 0)
            })
        });
        match dominated {
            Some(u) => {
                alive[u / 64] &= !(1 << (u % 64));
                left -= 1;
            }
            None => return false,
        }
    }
    true
}

/// Backward induction over (cop, robber, mover). Players may stay put. The
/// cop picks a start, then the robber, then the cop moves first.
pub fn copwin_bruteforce(g: &SmallGraph) -> Result<bool, OracleError> {
    let n = g.n();
    if n > MAX_SOLVER_N {
        return Err(OracleError::TooLarge(n));
    }
    if !g.is_connected() {
        return Err(OracleError::DisconnectedInput);
    }
    if n <= 1 {
        return Ok(true);
    }
    let closed: Vec<Vec<usize>> = (0..n)
        .map(|u| std::iter::once(u).chain(g.neighbors(u)).collect())
        .collect();
    // cop_move[c][r]: cop to move wins. rob_move[c][r]: robber to move, cop wins.
    let mut cop_move = vec![vec![false; n]; n];
    let mut rob_move = vec![vec![false; n]; n];
    let mut changed = true;
    while changed {
        changed = false;
        for c in 0..n {
            for r in 0..n {
                if !cop_move[c][r] && closed[c].iter().any(|&c2| c2 == r || rob_move[c2][r]) {
                    cop_move[c][r] = true;
                    changed = true;
                }
                if !rob_move[c][r] && (c == r || closed[r].iter().all(|&r2| cop_move[c][r2])) {
                    rob_move[c][r] = true;
                    changed = true;
                }
            }
        }
    }
    Ok((0..n).any(|c| (0..n).all(|r| cop_move[c][r])))
}
