fn main() { std::process::exit(topomapper::cli::main()) }
