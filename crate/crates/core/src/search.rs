//! Enumeration of integer vectors in a box with a fixed total and lower bounds
//! on subset sums.
//!
//! Coordinates are assigned in order with the smallest values first, so
//! solutions come out in lexicographic order. A partial assignment is pruned
//! as soon as some subset constraint can no longer be met by the unassigned
//! coordinates.

use std::ops::ControlFlow;

/// Find integer `d` with `lower ≤ d ≤ upper`, `Σ d = total`, and
/// `Σ_{i∈Y} d_i ≥ bound` for every `(Y, bound)` constraint.
#[derive(Debug, Clone)]
pub(crate) struct BoxProblem {
    pub total: i64,
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
    /// `(mask, bound)` pairs.
    pub constraints: Vec<(u32, i64)>,
}

impl BoxProblem {
    pub fn all(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        self.visit(&mut |d| {
            out.push(d.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    pub fn first(&self) -> Option<Vec<i64>> {
        let mut found = None;
        self.visit(&mut |d| {
            found = Some(d.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    fn visit(&self, f: &mut dyn FnMut(&[i64]) -> ControlFlow<()>) {
        let n = self.lower.len();
        if n == 0 || self.lower.iter().zip(&self.upper).any(|(l, u)| l > u) {
            return;
        }
        // suffix sums of the box bounds
        let mut low_tail = vec![0i64; n + 1];
        let mut high_tail = vec![0i64; n + 1];
        for i in (0..n).rev() {
            low_tail[i] = low_tail[i + 1] + self.lower[i];
            high_tail[i] = high_tail[i + 1] + self.upper[i];
        }
        let mut current = vec![0i64; n];
        let _ = self.descend(0, 0, &mut current, &low_tail, &high_tail, f);
    }

    fn descend(
        &self,
        depth: usize,
        assigned: i64,
        current: &mut [i64],
        low_tail: &[i64],
        high_tail: &[i64],
        f: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let n = current.len();
        let rest = self.total - assigned;
        if depth == n {
            return if rest == 0 { f(current) } else { ControlFlow::Continue(()) };
        }
        if rest < low_tail[depth] || rest > high_tail[depth] {
            return ControlFlow::Continue(());
        }
        let lo = self.lower[depth].max(rest - high_tail[depth + 1]);
        let hi = self.upper[depth].min(rest - low_tail[depth + 1]);
        if depth + 1 == n {
            // last coordinate is forced
            if lo <= rest && rest <= hi {
                current[depth] = rest;
                if self.feasible(current, depth + 1) {
                    return f(current);
                }
            }
            return ControlFlow::Continue(());
        }
        for v in lo..=hi {
            current[depth] = v;
            if self.feasible(current, depth + 1) {
                self.descend(depth + 1, assigned + v, current, low_tail, high_tail, f)?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Can every constraint still be met once coordinates `..fixed` are set?
    fn feasible(&self, current: &[i64], fixed: usize) -> bool {
        let n = current.len();
        let assigned: i64 = current[..fixed].iter().sum();
        let rest = self.total - assigned;
        self.constraints.iter().all(|&(mask, bound)| {
            let mut inside = 0i64;
            let mut high_in = 0i64;
            let mut low_out = 0i64;
            for i in 0..n {
                let member = mask & (1 << i) != 0;
                if i < fixed {
                    if member {
                        inside += current[i];
                    }
                } else if member {
                    high_in += self.upper[i];
                } else {
                    low_out += self.lower[i];
                }
            }
            inside + high_in.min(rest - low_out) >= bound
        })
    }
}
