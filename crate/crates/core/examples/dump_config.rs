//! Prints the default configuration as TOML, a starting point for `--config`.
//!
//! Run with `cargo run --example dump_config > my.toml`.

fn main() {
    print!("{}", rhythmic::cli::Config::default().to_toml());
}
