use super::{GraphError, TransitionMatrix};

/// Damping, iteration count and optional early stop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankParams {
    pub damping: f64,
    pub iterations: usize,
    /// Stop once the L1 change between iterates falls below this.
    pub tolerance: Option<f64>,
}

impl Default for PageRankParams {
    fn default() -> Self {
        Self {
            damping: 0.85,
            iterations: 100,
            tolerance: None,
        }
    }
}

impl PageRankParams {
    pub fn new(damping: f64, iterations: usize) -> Self {
        Self {
            damping,
            iterations,
            tolerance: None,
        }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if !(0.0..=1.0).contains(&self.damping) {
            return Err(GraphError::InvalidParams(format!("damping {} outside [0, 1]", self.damping)));
        }
        if self.iterations == 0 {
            return Err(GraphError::InvalidParams("at least one iteration is required".into()));
        }
        if let Some(t) = self.tolerance {
            if t.is_nan() || t <= 0.0 {
                return Err(GraphError::InvalidParams(format!("tolerance {t} must be positive")));
            }
        }
        Ok(())
    }
}

/// Power-iteration result with per-iteration L1 changes.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration {
    pub ranks: Vec<f64>,
    pub iterations: usize,
    /// `‖PR_k − PR_{k−1}‖₁` for each iteration performed.
    pub deltas: Vec<f64>,
}

/// Double-precision `PR_k = d·H·PR_{k−1} + (1−d)/N`, from uniform `PR_0`.
pub fn reference_pagerank(h: &TransitionMatrix, p: &PageRankParams) -> Result<Vec<f64>, GraphError> {
    reference_pagerank_detailed(h, p).map(|r| r.ranks)
}

pub fn reference_pagerank_detailed(h: &TransitionMatrix, p: &PageRankParams) -> Result<PowerIteration, GraphError> {
    p.validate()?;
    let n = h.size();
    let uniform = 1.0 / n as f64;
    let teleport = (1.0 - p.damping) / n as f64;
    let mut pr = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut deltas = Vec::with_capacity(p.iterations);
    for _ in 0..p.iterations {
        next.iter_mut().for_each(|x| *x = 0.0);
        let mut dangling_mass = 0.0;
        for (j, &rank) in pr.iter().enumerate() {
            if h.is_dangling(j) {
                dangling_mass += rank;
            } else {
                for &(i, w) in h.column(j) {
                    next[i] += w * rank;
                }
            }
        }
        let spread = dangling_mass * uniform;
        for x in next.iter_mut() {
            *x = p.damping * (*x + spread) + teleport;
        }
        let delta: f64 = next.iter().zip(&pr).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut pr, &mut next);
        deltas.push(delta);
        if p.tolerance.is_some_and(|t| delta < t) {
            break;
        }
    }
    Ok(PowerIteration {
        iterations: deltas.len(),
        ranks: pr,
        deltas,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{build_transition, Graph};
    use super::*;

    #[test]
    fn two_node_edge_stays_uniform() {
        let h = build_transition(&Graph::unlabeled(2, [(0, 1)], false).unwrap());
        for d in [0.0, 0.5, 0.85, 1.0] {
            for n in [1, 7, 100] {
                let r = reference_pagerank(&h, &PageRankParams::new(d, n)).unwrap();
                assert_eq!(r, vec![0.5, 0.5]);
            }
        }
    }

    #[test]
    fn zero_damping_is_uniform_after_one_step() {
        let h = build_transition(&Graph::unlabeled(4, [(0, 1), (0, 2), (0, 3)], false).unwrap());
        let r = reference_pagerank(&h, &PageRankParams::new(0.0, 1)).unwrap();
        assert!(r.iter().all(|&x| (x - 0.25).abs() < 1e-15));
    }

    #[test]
    fn early_stop() {
        let h = build_transition(&Graph::unlabeled(4, [(0, 1), (0, 2), (0, 3)], false).unwrap());
        let p = PageRankParams {
            tolerance: Some(1e-6),
            ..PageRankParams::default()
        };
        let r = reference_pagerank_detailed(&h, &p).unwrap();
        assert!(r.iterations < 100);
        assert!(*r.deltas.last().unwrap() < 1e-6);
    }

    #[test]
    fn params_validated() {
        let h = build_transition(&Graph::unlabeled(2, [(0, 1)], false).unwrap());
        assert!(reference_pagerank(&h, &PageRankParams::new(1.1, 3)).is_err());
        assert!(reference_pagerank(&h, &PageRankParams::new(0.5, 0)).is_err());
    }
}
