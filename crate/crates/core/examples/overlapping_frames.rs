//! Two sensors with partly different vocabularies: the first knows objects
//! A and B, the second B and C.
//!
//! ```sh
//! cargo run --example overlapping_frames
//! ```

use tbm::overlap::combine_overlapping;
use tbm::{Frame, MassFunction};

fn main() -> tbm::Result<()> {
    let f1 = Frame::new(["A", "B"])?;
    let f2 = Frame::new(["B", "C"])?;
    let m1 = MassFunction::new(
        f1.clone(),
        [
            (f1.subset(["A"])?, 0.6),
            (f1.subset(["B"])?, 0.1),
            (f1.full(), 0.3),
        ],
    )?;
    let m2 = MassFunction::new(
        f2.clone(),
        [
            (f2.subset(["B"])?, 0.7),
            (f2.subset(["C"])?, 0.2),
            (f2.full(), 0.1),
        ],
    )?;

    let fused = combine_overlapping(&m1, &m2)?;
    let m = &fused.mass;
    let frame = m.frame();
    println!("shared part of the frames: {}", frame.format(fused.shared));
    println!("{:<10} {:>6} {:>6}", "set", "m", "pl");
    for bits in 1..1u64 << frame.len() {
        let set = tbm::Subset::from_bits(bits);
        println!(
            "{:<10} {:>6.3} {:>6.3}",
            frame.format(set),
            m.mass(set),
            m.pl(set)
        );
    }

    let betp = m.pignistic()?;
    for (label, p) in frame.labels().iter().zip(betp.probabilities()) {
        println!("BetP({label}) = {p:.3}");
    }

    // Conditioning the fused result on the shared part gives what each
    // sensor says about B, combined: (.1 + .3) · (.7 + .1).
    let b1 = m1.condition(f1.subset(["B"])?).mass(f1.subset(["B"])?);
    let b2 = m2.condition(f2.subset(["B"])?).mass(f2.subset(["B"])?);
    let via_fusion = m.condition(fused.shared).mass(fused.shared);
    println!(
        "m[B](B) via fusion = {via_fusion:.3}, from the inputs = {:.3}",
        b1 * b2
    );
    Ok(())
}
