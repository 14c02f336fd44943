//! The information estimators on hand-built tables.
//!
//! Run: cargo run --example estimators

use semantic_chemotaxis::metrics::{
    conditional_mutual_information, mutual_information, transfer_entropy, JointHistogram, PairHistogram,
};

fn main() -> Result<(), semantic_chemotaxis::metrics::MetricsError> {
    // Next state copies a uniform 4-state environment: 2 bits.
    let mut copy = vec![0.0; 4 * 4];
    for y in 0..4 {
        copy[y * 4 + y] = 1.0;
    }
    let h = JointHistogram::from_weights([4, 1, 4], copy);
    println!("perfect copy      I(X'; Y | X) = {:.4}", conditional_mutual_information(&h)?);

    // Next state independent of the environment: 0 bits.
    let (pn, pe) = ([0.2, 0.5, 0.3], [0.6, 0.4]);
    let product = pn.iter().flat_map(|a| pe.iter().map(move |b| a * b)).collect();
    let h = JointHistogram::from_weights([3, 1, 2], product);
    println!("independent       I(X'; Y | X) = {:.4}", conditional_mutual_information(&h)?);

    // Binary symmetric channel with 10% flips.
    let h = PairHistogram::from_weights([2, 2], vec![0.45, 0.05, 0.05, 0.45]);
    println!("noisy channel     I(X; Y)      = {:.4}", mutual_information(&h)?);

    println!("transfer entropy of (0.1, 0.2, 0.3) = {:?}", transfer_entropy(&[0.1, 0.2, 0.3]));
    Ok(())
}
