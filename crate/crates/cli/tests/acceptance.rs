//! One line per acceptance criterion; exits non-zero if any fails.
//! `cargo test -p freealg-cli --test acceptance`

use freealg_cli::selftest::{run_all, Settings};

fn main() {
    let reports = run_all(&Settings::default());
    for r in &reports {
        println!("{r}");
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("{passed} of {} criteria passed", reports.len());
    if passed < reports.len() {
        std::process::exit(1);
    }
}
