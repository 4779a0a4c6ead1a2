//! Mass functions on one frame: measures, pignistic decision, combination,
//! conditioning and discounting.
//!
//! ```sh
//! cargo run --example belief_calculus
//! ```

use tbm::{Frame, MassFunction};

fn main() -> tbm::Result<()> {
    let frame = Frame::new(["flu", "cold", "allergy"])?;
    let s = |names: &[&str]| frame.subset(names.iter().copied());

    // One clinician leans towards an infection, the other rules out flu.
    let m1 = MassFunction::new(
        frame.clone(),
        [
            (s(&["flu", "cold"])?, 0.6),
            (s(&["flu"])?, 0.2),
            (frame.full(), 0.2),
        ],
    )?;
    let m2 = MassFunction::new(
        frame.clone(),
        [(s(&["cold", "allergy"])?, 0.7), (frame.full(), 0.3)],
    )?;

    let pooled = m1.conjunctive(&m2)?;
    println!("pooled, unnormalized:");
    for &(set, m) in pooled.focal() {
        println!("  m({}) = {m:.3}", frame.format(set));
    }
    println!("conflict m(∅) = {:.3}", pooled.conflict());

    let infection = s(&["flu", "cold"])?;
    println!(
        "bel(infection) = {:.3}, pl(infection) = {:.3}",
        pooled.bel(infection),
        pooled.pl(infection)
    );

    let betp = pooled.pignistic()?;
    for (label, p) in frame.labels().iter().zip(betp.probabilities()) {
        println!("BetP({label}) = {p:.3}");
    }
    println!("decision: {}", frame.label(betp.argmax()));

    // Dempster's rule is the normalized conjunctive rule.
    let dempster = pooled.normalized()?;
    println!("Dempster m(cold) = {:.3}", dempster.mass(s(&["cold"])?));

    // Learning that it is not an allergy.
    let conditioned = pooled.condition(infection);
    println!(
        "after ruling out allergy, m(∅) = {:.3}",
        conditioned.conflict()
    );

    // A source judged 80% reliable.
    let discounted = m2.discount(0.8)?;
    println!("discounted m2(Ω) = {:.3}", discounted.mass(frame.full()));

    println!("{}", dempster.to_json());
    Ok(())
}
