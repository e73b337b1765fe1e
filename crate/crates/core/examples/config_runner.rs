//! Driving the library from a TOML experiment file, the way the `setfix`
//! binary does.
//!
//! ```text
//! cargo run --example config_runner
//! cargo run --example config_runner -- path/to/experiment.toml iterate
//! ```

use setfix::cli::{parse_config, serialize_config};

const EXPERIMENT: &str = r#"
seed = 11

[map]
kind = "averaged"
mu = 0.5
inner = { kind = "builtin", name = "half-band" }

[iterate]
theta = 0.3
x0 = [0.9]
selector = "random"
max_iter = 200
"#;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() > 2 {
        // forward to the command line front end
        std::process::exit(setfix::cli::run(["setfix", &args[2], &args[1]]));
    }

    let cfg = match parse_config(EXPERIMENT) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("parsed [{}] for {}", cfg.command.section(), cfg.map.as_ref().unwrap().describe());
    println!("--- normalised ---\n{}", serialize_config(&cfg));

    let dir = std::env::temp_dir().join("setfix-config-runner");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("experiment.toml");
    std::fs::write(&path, EXPERIMENT).unwrap();
    let csv = dir.join("trace.csv");
    let code = setfix::cli::run([
        "setfix",
        "iterate",
        path.to_str().unwrap(),
        "--set",
        "iterate.theta=0.4",
        "--output",
        csv.to_str().unwrap(),
    ]);
    println!("exit status {code}, trace in {}", csv.display());
}
