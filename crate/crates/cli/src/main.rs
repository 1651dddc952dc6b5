use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, Command};
use hwlab_cli::commands::{assemble, run};
use hwlab_cli::config::{CommandKind, KEYS};

fn cli() -> Command {
    let names: Vec<&'static str> = CommandKind::ALL.iter().map(|c| c.name()).collect();
    let mut cmd = Command::new("hwlab")
        .about("Solitary waves and dynamics of the half-wave-Schrödinger equation")
        .arg(
            Arg::new("command")
                .required(true)
                .value_parser(names),
        )
        .arg(Arg::new("config").long("config").value_name("PATH"))
        .arg(Arg::new("out").long("out").value_name("DIR"));
    for key in KEYS.iter().filter(|k| **k != "command") {
        cmd = cmd.arg(
            Arg::new(*key)
                .long(*key)
                .value_name("VALUE")
                .action(ArgAction::Set)
                .overrides_with(*key),
        );
    }
    cmd
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let command = matches.get_one::<String>("command").expect("required");
    let config = matches.get_one::<String>("config").map(PathBuf::from);
    let mut overrides: Vec<(String, String)> = KEYS
        .iter()
        .filter_map(|k| matches.get_one::<String>(k).map(|v| (k.to_string(), v.clone())))
        .collect();
    if let Some(out) = matches.get_one::<String>("out") {
        overrides.push(("output.out_dir".into(), out.clone()));
    }
    let result = assemble(command, config.as_deref(), &overrides).and_then(|cfg| run(&cfg));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("hwlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
