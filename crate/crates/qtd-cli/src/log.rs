//! Minimal stderr logging gated on the `QTD_LOG` environment variable:
//! `quiet`, `info` (default), or `debug`.

use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Quiet,
    Info,
    Debug,
}

pub fn level() -> Level {
    static LEVEL: OnceLock<Level> = OnceLock::new();
    *LEVEL.get_or_init(|| match std::env::var("QTD_LOG").as_deref() {
        Ok("quiet") | Ok("QUIET") => Level::Quiet,
        Ok("debug") | Ok("DEBUG") => Level::Debug,
        _ => Level::Info,
    })
}

pub fn info(msg: impl AsRef<str>) {
    if level() >= Level::Info {
        eprintln!("qtd: {}", msg.as_ref());
    }
}

pub fn debug(msg: impl AsRef<str>) {
    if level() >= Level::Debug {
        eprintln!("qtd[debug]: {}", msg.as_ref());
    }
}
