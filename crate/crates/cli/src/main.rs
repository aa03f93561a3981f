use clap::Parser;

fn main() {
    let cli = ordcomp_cli::Cli::parse();
    let (out, code) = ordcomp_cli::run(&cli);
    print!("{out}");
    std::process::exit(code);
}
