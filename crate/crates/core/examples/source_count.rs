//! How many components failed? Four sensors each point at one component;
//! grouping them so that no group contradicts itself suggests an answer.
//!
//! ```sh
//! cargo run --example source_count
//! ```

use tbm::conflict::{
    all_partitions, best_partition, suggest_source_count, EvidencePool, DEFAULT_TOLERANCE,
};
use tbm::{Frame, MassFunction};

fn main() -> tbm::Result<()> {
    let frame = Frame::new(["C1", "C2"])?;
    let sensors = [("C1", 0.7), ("C1", 0.8), ("C2", 0.6), ("C2", 0.9)]
        .into_iter()
        .map(|(c, s)| MassFunction::simple_support(frame.clone(), frame.singleton(c)?, s))
        .collect::<tbm::Result<Vec<_>>>()?;
    let pool = EvidencePool::new(sensors)?;

    println!("{:<8} {:<14} {:>6}", "groups", "conflicts", "total");
    for k in 1..=2 {
        for report in all_partitions(&pool, k)? {
            let per_group: Vec<String> = report
                .group_conflicts
                .iter()
                .map(|c| format!("{c:.2}"))
                .collect();
            println!(
                "{:<8} {:<14} {:>6.2}",
                report.partition.to_string(),
                per_group.join("/"),
                report.total
            );
        }
    }

    let best = best_partition(&pool, 2)?;
    println!(
        "best split into two: {} (total {:.2})",
        best.partition, best.total
    );
    let (k, _) = suggest_source_count(&pool, pool.len(), DEFAULT_TOLERANCE)?;
    println!("suggested number of failed components: {k}");
    Ok(())
}
