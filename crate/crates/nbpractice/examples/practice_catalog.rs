//! Print the best-practice catalog the checks are built from: id, title,
//! theme, how many sources recommend each practice, and whether this crate
//! can measure it statically.
//!
//! ```sh
//! cargo run --example practice_catalog
//! ```

use nbpractice::registry::{operationalized_ids, registry};

fn main() {
    println!("{:<5} {:<7} {:<45} {:>7}  sources", "id", "checked", "title", "support");
    for entry in registry() {
        println!(
            "{:<5} {:<7} {:<45} {:>7}  {}",
            entry.bp_id(),
            if entry.operationalized { "yes" } else { "-" },
            entry.title,
            entry.support_count(),
            entry.source_ids.join(", ")
        );
    }
    println!(
        "\n{} of {} practices have static checks: {:?}",
        operationalized_ids().len(),
        registry().len(),
        operationalized_ids()
    );
}
