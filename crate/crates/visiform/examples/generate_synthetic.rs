//! Generates one synthetic interface (layout plus its gold tree) and prints
//! both documents. Same seed, same bytes, every time.
//!
//!     cargo run --example generate_synthetic [seed]

use visiform::layout::to_pretty_json;
use visiform::synth::{generate_synthetic, SyntheticSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(42);
    let spec = SyntheticSpec {
        groups: 3,
        min_fields: 2,
        max_fields: 4,
        jitter: 1.5,
    };
    spec.validate()?;

    let (layout, gold) = generate_synthetic(seed, &spec)?;
    println!("layout document:\n{}", layout.to_json());
    println!("gold tree document:\n{}", to_pretty_json(&gold.to_document()));

    // The gold rows are what the extractor is asked to rediscover; with
    // jitter this strong it will miss some of them.
    Ok(())
}
