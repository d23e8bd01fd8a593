use std::process::exit;

fn main() {
    exit(wildbrauer::cli::run(std::env::args()));
}
