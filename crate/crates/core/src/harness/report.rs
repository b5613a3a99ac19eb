use std::fmt::Write as _;

use super::table::ResultTable;
use crate::metrics::Weighting;

/// How method ranks move from unweighted to linear to quadratic kappa.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankChangeReport {
    /// Per weighting, `(method name, rank)` in rank order.
    pub columns: [Vec<(String, usize)>; 3],
    /// Per method in table order: name, the three ranks and the deltas
    /// between adjacent weightings (positive means the method moved up).
    pub methods: Vec<MethodRanks>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodRanks {
    pub name: String,
    pub ranks: [usize; 3],
    pub deltas: [i64; 2],
}

pub fn rank_change_report(table: &ResultTable) -> RankChangeReport {
    let columns = Weighting::ALL.map(|w| {
        let mut column: Vec<(usize, String, usize)> = table
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.rank(w), r.name(), i))
            .collect();
        column.sort_by_key(|(rank, _, i)| (*rank, *i));
        column
            .into_iter()
            .map(|(rank, name, _)| (name, rank))
            .collect()
    });
    let methods = table
        .rows
        .iter()
        .map(|r| {
            let ranks = r.ranks;
            MethodRanks {
                name: r.name(),
                ranks,
                deltas: [
                    ranks[0] as i64 - ranks[1] as i64,
                    ranks[1] as i64 - ranks[2] as i64,
                ],
            }
        })
        .collect();
    RankChangeReport { columns, methods }
}

fn signed(delta: i64) -> String {
    if delta == 0 {
        "0".to_string()
    } else {
        format!("{delta:+}")
    }
}

impl RankChangeReport {
    pub fn to_text(&self) -> String {
        let width = self
            .methods
            .iter()
            .map(|m| m.name.chars().count())
            .max()
            .unwrap_or(0)
            .max(10);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>3}  {:<width$}  {:>3}  {:<width$}  {:>3}  {:<width$}",
            "#", "Unweighted", "#", "Linear", "#", "Quadratic"
        );
        for i in 0..self.methods.len() {
            let cells: Vec<String> = self
                .columns
                .iter()
                .map(|c| format!("{:>3}  {:<width$}", c[i].1, c[i].0))
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out.push('\n');
        let _ = writeln!(
            out,
            "{:<width$}  {:>4} {:>4} {:>4}  {:>6} {:>6}",
            "Method", "Unw", "Lin", "Quad", "U->L", "L->Q"
        );
        for m in &self.methods {
            let _ = writeln!(
                out,
                "{:<width$}  {:>4} {:>4} {:>4}  {:>6} {:>6}",
                m.name,
                m.ranks[0],
                m.ranks[1],
                m.ranks[2],
                signed(m.deltas[0]),
                signed(m.deltas[1])
            );
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "method,unweighted_rank,linear_rank,quadratic_rank,delta_unweighted_linear,delta_linear_quadratic\n",
        );
        for m in &self.methods {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                m.name, m.ranks[0], m.ranks[1], m.ranks[2], m.deltas[0], m.deltas[1]
            );
        }
        out
    }
}
