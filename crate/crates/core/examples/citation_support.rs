//! Re-ranking retrieved documents with their citation links.
//!
//! ```sh
//! cargo run --example citation_support
//! ```

use tbm::pas::{
    degree_of_support, enumerate_arguments, monte_carlo_support, rank_documents, CitationGraph,
    Document,
};

fn main() -> tbm::Result<()> {
    let docs = (1..=6)
        .map(|i| Document::new(format!("D{i}"), Some(i)))
        .collect();
    let graph = CitationGraph::new(
        docs,
        [
            ("D1", "D2"),
            ("D1", "D6"),
            ("D4", "D3"),
            ("D3", "D5"),
            ("D5", "D4"),
        ],
    )?;

    for target in ["D6", "D4"] {
        let expr = enumerate_arguments(&graph, target)?;
        let exact = degree_of_support(&expr)?;
        let sampled = monte_carlo_support(&expr, 100_000, 1)?;
        println!("support({target}) = {expr}");
        println!(
            "  exact {exact:.4}, sampled {:.4} ± {:.4}",
            sampled.mean, sampled.std_error
        );
    }

    println!("{:<4} {:>4} {:>8} {:>8}", "id", "rank", "alpha", "support");
    for d in rank_documents(&graph)? {
        println!(
            "{:<4} {:>4} {:>8.4} {:>8.4}",
            d.id,
            d.rank.unwrap_or(0),
            d.alpha,
            d.support
        );
    }
    Ok(())
}
