use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct RankRow {
    /// 1-based position.
    pub rank: usize,
    pub node: usize,
    pub label: String,
    pub score: f64,
}

/// Top `k` nodes by descending score; equal scores keep ascending index.
/// `k` larger than the node count is clamped.
pub fn rank_report(scores: &[f64], labels: &[String], k: usize) -> Vec<RankRow> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(pos, node)| RankRow {
            rank: pos + 1,
            node,
            label: labels.get(node).cloned().unwrap_or_else(|| node.to_string()),
            score: scores[node],
        })
        .collect()
}

pub const RANK_CSV_HEADER: &str = "rank,node,label,score";

pub fn rank_csv(rows: &[RankRow]) -> String {
    let mut out = String::from(RANK_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.rank, r.node, r.label, r.score);
    }
    out
}

pub const SUMMARY_CSV_HEADER: &str = "N,n,d,timesteps,model_seconds";

/// One-row run summary, header included.
pub fn summary_csv(nodes: usize, iterations: usize, damping: f64, timesteps: u64, model_seconds: f64) -> String {
    format!("{SUMMARY_CSV_HEADER}\n{nodes},{iterations},{damping},{timesteps},{model_seconds}\n")
}
