use clap::Parser;

fn main() {
    let cli = gf2_additive_cli::cli::Cli::parse();
    match gf2_additive_cli::cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            let diag = serde_json::json!({ "error": format!("{e:#}") });
            eprintln!("{diag}");
            std::process::exit(2);
        }
    }
}
