//! One line per acceptance criterion. Exits nonzero if any criterion is red.

use sigma2::verify::{run_criterion, VerifyOptions, CRITERIA};

fn main() {
    let opts = VerifyOptions::default();
    let mut red = vec![];
    for (id, _, _) in CRITERIA {
        let r = run_criterion(id, &opts);
        println!("{r}");
        for line in &r.info {
            println!("       info: {line}");
        }
        if !r.passed {
            red.push(id);
        }
    }
    if red.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
    } else {
        println!("acceptance: red criteria {red:?}");
        std::process::exit(1);
    }
}
