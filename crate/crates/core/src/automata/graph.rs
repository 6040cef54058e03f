//! Explicit-graph helpers shared by emptiness, trimming and membership.

use std::collections::VecDeque;

/// Tarjan's algorithm, iterative. Returns the SCC index of every node;
/// indices are in reverse topological order.
pub fn scc(n: usize, succ: &dyn Fn(usize) -> Vec<usize>) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, succ(root), 0));
        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, succ(w), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Nodes reachable from `start`.
pub fn reachable(n: usize, start: &[usize], succ: &dyn Fn(usize) -> Vec<usize>) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in start {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for w in succ(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Nodes lying on a cycle through an accepting node, plus everything that
/// can reach such a cycle.
pub fn productive(n: usize, accepting: &dyn Fn(usize) -> bool, succ: &dyn Fn(usize) -> Vec<usize>) -> Vec<bool> {
    let comp = scc(n, succ);
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut size = vec![0usize; ncomp];
    let mut has_acc = vec![false; ncomp];
    let mut self_loop = vec![false; ncomp];
    let mut succs: Vec<Vec<usize>> = Vec::with_capacity(n);
    for v in 0..n {
        size[comp[v]] += 1;
        if accepting(v) {
            has_acc[comp[v]] = true;
        }
        let s = succ(v);
        if s.contains(&v) {
            self_loop[comp[v]] = true;
        }
        succs.push(s);
    }
    let good: Vec<bool> = (0..ncomp).map(|c| has_acc[c] && (size[c] > 1 || self_loop[c])).collect();
    // components come out in reverse topological order, so successors are
    // finalized before predecessors
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| comp[v]);
    let mut comp_prod = good.clone();
    for &v in &order {
        let c = comp[v];
        if succs[v].iter().any(|&w| comp[w] != c && comp_prod[comp[w]]) {
            comp_prod[c] = true;
        }
    }
    (0..n).map(|v| comp_prod[comp[v]]).collect()
}

/// Shortest path from any of `from` to a node satisfying `goal`, as the
/// node list from the start node through the goal.
pub fn bfs_path(
    from: &[usize],
    goal: &dyn Fn(usize) -> bool,
    succ: &dyn Fn(usize) -> Vec<usize>,
    n: usize,
) -> Option<Vec<usize>> {
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in from {
        if goal(s) {
            return Some(vec![s]);
        }
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for w in succ(v) {
            if !seen[w] {
                seen[w] = true;
                pred[w] = Some(v);
                if goal(w) {
                    let mut path = vec![w];
                    let mut cur = w;
                    while let Some(p) = pred[cur] {
                        path.push(p);
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_finds_cycle() {
        let adj = [vec![1], vec![2], vec![1, 3], vec![]];
        let c = scc(4, &|v| adj[v].clone());
        assert_eq!(c[1], c[2]);
        assert_ne!(c[0], c[1]);
        assert_ne!(c[3], c[1]);
        let p = productive(4, &|v| v == 2, &|v| adj[v].clone());
        assert_eq!(p, vec![true, true, true, false]);
    }
}
