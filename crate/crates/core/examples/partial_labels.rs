//! Training on cases whose class is only known up to a set.
//!
//! Three Gaussian classes; each training case is labelled with a pair of
//! classes that contains its true one. The classifier is tuned by
//! leave-one-out and then scored on precisely labelled test cases.
//!
//! ```sh
//! cargo run --release --example partial_labels
//! ```

use tbm::classifier::{
    classify, evaluate_pcc, tune_a, ClassifierConfig, LabeledCase, LearningSet, DEFAULT_A_GRID,
};
use tbm::experiments::{case_study, generate, lda_baseline};

fn main() -> tbm::Result<()> {
    let (spec, scheme) = case_study(1, None)?;
    let data = generate(&spec, &scheme, 7)?;
    let frame = data.frame.clone();

    let train: Vec<LabeledCase> = data
        .train
        .iter()
        .map(|s| LabeledCase::new(s.features.clone(), s.pkc))
        .collect();
    for case in train.iter().take(4) {
        println!(
            "x = {:>6.2?}  pkc = {}",
            case.features,
            frame.format(case.pkc)
        );
    }

    let ls = LearningSet::fit(frame.clone(), train)?;
    let cfg = ClassifierConfig::default();
    let a = tune_a(&ls, &DEFAULT_A_GRID, &cfg)?;
    let cfg = cfg.with_a(a);
    println!("slope chosen by leave-one-out: {a}");

    let query = [0.5, 0.3];
    let c = classify(&ls, &query, &cfg)?;
    println!(
        "query {query:?}: {} (BetP {:.3?}, conflict {:.4})",
        c.label(),
        c.betp.probabilities(),
        c.mass.conflict()
    );

    let tests: Vec<LabeledCase> = data
        .test
        .iter()
        .map(|s| LabeledCase::new(s.features.clone(), s.pkc))
        .collect();
    let pcc = evaluate_pcc(&ls, &tests, &cfg)?;
    let lda = lda_baseline(&data.train, &data.test, frame.len(), cfg.ridge)?;
    println!("PCC with pair labels: {pcc:.1}");
    println!("linear discriminant with true labels: {lda:.1}");
    Ok(())
}
