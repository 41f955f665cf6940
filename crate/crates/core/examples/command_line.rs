//! Drives the command-line front end in-process.

fn main() {
    let runs: [&[&str]; 4] = [
        &["compute", "--surface", "g=1", "--eval", "3,5"],
        &["compute", "--variety", "char", "--surface", "g=1;branches=2", "--route", "both"],
        &["verify", "--surface", "g=1", "--parabolic", "j+=1", "--primes", "3,5"],
        &["tables", "--g-range", "1..2", "--b-range", "1..2", "--r-range", "0..1"],
    ];
    for args in runs {
        println!("$ nodevar {}", args.join(" "));
        let argv = std::iter::once("nodevar").chain(args.iter().copied());
        let code = nodevar::cli::run(argv, &mut std::io::stdout(), &mut std::io::stderr());
        println!("(exit {code})\n");
    }
}
