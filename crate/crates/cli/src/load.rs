//! Reading inputs and building the window a command works in.

use std::fmt;
use std::path::Path;

use anyhow::{Context as _, Result};
use tq_core::derived::{ObjId, Window, WindowOptions};
use tq_core::sections::Section;
use tq_core::threadquiver::{expand_all, parse, Expansion, ThreadQuiver};

use crate::Global;

/// An error in what the user supplied rather than in a computation.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

pub fn thread_quiver(path: &Path) -> Result<ThreadQuiver> {
    let text = read(path)?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A thread quiver, its expansion when it has thread arrows, and the window
/// built on the expanded quiver.
pub struct Context {
    pub tq: ThreadQuiver,
    pub expansion: Option<Expansion>,
    pub window: Window,
}

impl Context {
    pub fn load(path: &Path, g: &Global) -> Result<Context> {
        let tq = thread_quiver(path)?;
        let expansion = if tq.threads.is_empty() {
            None
        } else {
            Some(expand_all(&tq, g.depth)?)
        };
        let quiver = match &expansion {
            Some(e) => e.quiver.clone(),
            None => tq.underlying_quiver(),
        };
        let window = Window::build(&quiver, WindowOptions::radius(g.radius as usize)).context("building the window")?;
        Ok(Context { tq, expansion, window })
    }

    /// `name@level` or `name`; a leading `P` or `P_` naming a projective is
    /// accepted when the bare name is unknown.
    pub fn object(&self, text: &str) -> Result<ObjId> {
        match self.window.lookup(text) {
            Ok(id) => Ok(id),
            Err(first) => {
                for prefix in ["P_", "P"] {
                    if let Some(rest) = text.strip_prefix(prefix) {
                        if let Ok(id) = self.window.lookup(rest) {
                            return Ok(id);
                        }
                    }
                }
                Err(usage(format!("unknown window object {text:?}: {first}")))
            }
        }
    }

    pub fn section(&self, path: Option<&Path>) -> Result<Section> {
        let Some(path) = path else {
            return Ok(Section::projective(&self.window));
        };
        let text = read(path)?;
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: not JSON: {e}", path.display())))?;
        Section::from_json(&self.window, &v).with_context(|| format!("reading section {}", path.display()))
    }
}
