//! Integer maximum flow (Edmonds–Karp) on small graphs.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug)]
struct Edge {
    to: usize,
    cap: u64,
    rev: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<Edge>>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Adds `from -> to` and returns a handle for [`FlowNetwork::flow_on`].
    pub(crate) fn add_edge(&mut self, from: usize, to: usize, cap: u64) -> (usize, usize) {
        let rev_from = self.adj[to].len() + usize::from(from == to);
        let rev_to = self.adj[from].len();
        self.adj[from].push(Edge {
            to,
            cap,
            rev: rev_from,
        });
        self.adj[to].push(Edge {
            to: from,
            cap: 0,
            rev: rev_to,
        });
        (from, rev_to)
    }

    /// Flow currently routed through the edge returned by `add_edge`.
    pub(crate) fn flow_on(&self, handle: (usize, usize)) -> u64 {
        let e = &self.adj[handle.0][handle.1];
        self.adj[e.to][e.rev].cap
    }

    pub(crate) fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let mut total = 0u64;
        let n = self.adj.len();
        loop {
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut queue = VecDeque::from([source]);
            let mut seen = vec![false; n];
            seen[source] = true;
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    break;
                }
                for (i, e) in self.adj[u].iter().enumerate() {
                    if e.cap > 0 && !seen[e.to] {
                        seen[e.to] = true;
                        prev[e.to] = Some((u, i));
                        queue.push_back(e.to);
                    }
                }
            }
            if !seen[sink] {
                return total;
            }
            let mut bottleneck = u64::MAX;
            let mut v = sink;
            while let Some((u, i)) = prev[v] {
                bottleneck = bottleneck.min(self.adj[u][i].cap);
                v = u;
            }
            let mut v = sink;
            while let Some((u, i)) = prev[v] {
                self.adj[u][i].cap -= bottleneck;
                let (to, rev) = (self.adj[u][i].to, self.adj[u][i].rev);
                self.adj[to][rev].cap += bottleneck;
                v = u;
            }
            total += bottleneck;
        }
    }
}
