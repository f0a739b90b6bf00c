fn main() {
    std::process::exit(spgraph_cli::main_with_args(std::env::args_os()));
}
