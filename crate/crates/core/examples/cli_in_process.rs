//! The command-line interface is a library function; this runs two
//! subcommands against the bundled data without spawning a process.

use helperrate::cli::run;

fn main() {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let dir = std::env::temp_dir().join("helperrate-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let out = dir.join("dsbs.csv");

    let code = run(["helperrate", "accinfo", "--src", &format!("{data}/orthogonal.json")]);
    println!("accinfo exit {code}");

    let code = run([
        "helperrate",
        "simulate-sw",
        "--src",
        &format!("{data}/dsbs.json"),
        "--n",
        "10,20",
        "--r1",
        "0.3,0.9",
        "--trials",
        "500",
        "--seed",
        "4",
        "--out",
        out.to_str().expect("utf-8 path"),
    ]);
    println!("simulate-sw exit {code}");
    print!("{}", std::fs::read_to_string(&out).unwrap_or_default());
}
