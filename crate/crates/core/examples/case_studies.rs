//! Replicates the five synthetic studies and prints mean PCC for the
//! evidential classifier (trained on partial labels) and the linear
//! discriminant (trained on true classes).
//!
//! ```sh
//! cargo run --release --example case_studies -- 5
//! ```

use tbm::experiments::{run_case_study, ExperimentConfig};

fn main() -> Result<(), tbm::Error> {
    let reps: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let seed = 2024;

    println!("study  setting            tbm     lda");
    for case in 1..=5 {
        let result = run_case_study(case, reps, seed, &ExperimentConfig::default())?;
        println!(
            "{case:>5}  {:<17} {:>6.1}  {:>6.1}",
            "default",
            result.tbm().mean,
            result.baseline().mean
        );
    }

    for sigma2 in [10.0, 15.0, 20.0, 25.0, 30.0, 50.0] {
        let cfg = ExperimentConfig {
            sigma2: Some(sigma2),
            ..ExperimentConfig::default()
        };
        let result = run_case_study(4, reps, seed, &cfg)?;
        let setting = format!("σ² = {sigma2}");
        println!(
            "{:>5}  {setting:<17} {:>6.1}  {:>6.1}",
            4,
            result.tbm().mean,
            result.baseline().mean
        );
    }

    let cfg = ExperimentConfig {
        sigma2: Some(50.0),
        ..ExperimentConfig::default()
    };
    let result = run_case_study(5, reps, seed, &cfg)?;
    println!(
        "{:>5}  {:<17} {:>6.1}  {:>6.1}",
        5,
        "σ² = 50, shared",
        result.tbm().mean,
        result.baseline().mean
    );
    Ok(())
}
