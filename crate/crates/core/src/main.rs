// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

use clap::Parser;

use chiralwalk::cli::{exit_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        eprintln!("chiralwalk: {err}");
        std::process::exit(exit_code(&err));
    }
}
