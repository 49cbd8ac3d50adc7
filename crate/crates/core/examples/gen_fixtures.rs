//! Regenerates `tests/fixtures/legendre.csv` from the exact-arithmetic oracle.
//!
//! ```text
//! cargo run -p signeq --example gen_fixtures > crates/core/tests/fixtures/legendre.csv
//! ```

#[path = "../tests/common/oracle.rs"]
mod oracle;

fn main() {
    println!("n,m,x,value,convention");
    for (n, m, x) in oracle::fixture_points() {
        println!(
            "{n},{m},{x:?},{},unnormalized-cs",
            oracle::assoc_legendre_decimal(n, m, x)
        );
    }
}
