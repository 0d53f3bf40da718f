//! Drives the config runner from code: parse a config file, run `evolve`,
//! and print the report without touching the disk.

use spinorsim::cli::{run, Command, RunConfig};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/examples/configs/fig5_polar.conf"
        )
        .into()
    });
    let cfg = match RunConfig::from_file(path.as_ref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    match run(Command::Evolve, &cfg, 0) {
        Ok(out) => {
            print!("{}", out.summary);
            for a in &out.artifacts {
                println!("would write {} ({} bytes)", a.name, a.contents.len());
            }
        }
        Err(e) => eprintln!("{e}"),
    }
}
