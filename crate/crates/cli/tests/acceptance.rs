use std::process::ExitCode;
use std::time::Instant;

use homcount_cli::desk::{DeskLab, Level};

fn main() -> ExitCode {
    let lab = match DeskLab::new(Level::Desk) {
        Ok(lab) => lab,
        Err(e) => {
            eprintln!("setup failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut failed = 0;
    for id in 1..=8 {
        let start = Instant::now();
        let outcome = lab.run(id);
        println!("{}", outcome.line());
        eprintln!("criterion {id}: {:.1}s", start.elapsed().as_secs_f64());
        failed += usize::from(!outcome.passed);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("{failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}
