use std::io::Write;

fn main() {
    let (out, err) = matfree_cli::run_args(std::env::args_os());
    print!("{}", out.text);
    eprint!("{err}");
    std::io::stdout().flush().ok();
    std::process::exit(out.code);
}
