fn main() {
    let stdin = std::io::stdin();
    let code = cham_cug::cli::main_with(
        std::env::args_os(),
        &mut stdin.lock(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
