//! `NSCHSNAP v1` plain-text snapshots.
//!
//! ```text
//! NSCHSNAP v1
//! <dims> <nx> <ny> <lx> <ly>
//! fields <name> <name> ...
//! # key = value          (optional comment lines with metadata)
//! <name>
//! <nx values per line, ny lines, row-major>
//! ...
//! ```
//!
//! Values are written with 17 significant digits, so a write/read round trip
//! is exact. The pressure `p` is always stored with zero mean; its level is
//! kept in the `p_level` comment and the modeling choice it belongs to in
//! `pressure_choice`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fields::{Grid, ScalarField};
use crate::solver::{Physics, State};

pub const MAGIC: &str = "NSCHSNAP v1";

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub grid: Grid,
    fields: Vec<(String, ScalarField)>,
    meta: Vec<(String, String)>,
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Snapshot {
        line,
        msg: msg.into(),
    }
}

impl Snapshot {
    pub fn new(grid: Grid) -> Self {
        Snapshot {
            grid,
            fields: Vec::new(),
            meta: Vec::new(),
        }
    }

    /// Adds or replaces a field.
    pub fn set_field(&mut self, name: &str, f: ScalarField) -> Result<()> {
        if *f.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(Error::param(
                "field name",
                format!("`{name}` must be a single word"),
            ));
        }
        match self.fields.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = f,
            None => self.fields.push((name.to_string(), f)),
        }
        Ok(())
    }

    pub fn field(&self, name: &str) -> Option<&ScalarField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn field_names(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|(n, _)| n.as_str())
    }

    pub fn set_meta(&mut self, key: &str, value: impl ToString) {
        let v = value.to_string();
        match self.meta.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = v,
            None => self.meta.push((key.to_string(), v)),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn meta_f64(&self, key: &str) -> Option<f64> {
        self.meta(key).and_then(|v| v.parse().ok())
    }

    /// Snapshot of a solver state with the physics needed to post-process it.
    pub fn from_state(state: &State, physics: &Physics) -> Self {
        let g = *state.grid();
        let mut s = Snapshot::new(g);
        let axes = ["x", "y"];
        let mut put =
            |name: String, f: &ScalarField| s.set_field(&name, f.clone()).expect("state grid");
        put("phi".into(), &state.phi);
        put("rho".into(), &state.rho);
        put("mu".into(), &state.mu);
        put("p".into(), &state.p);
        for (d, axis) in axes.iter().enumerate().take(g.dims()) {
            put(format!("u_{axis}"), state.u.comp(d));
        }
        for (d, axis) in axes.iter().enumerate().take(g.dims()) {
            put(format!("jtilde_{axis}"), state.jtilde.comp(d));
        }
        put("gamma".into(), &state.gamma);
        s.set_meta("t", state.t);
        s.set_meta("p_level", state.p_level);
        s.set_meta("pressure_choice", "phi-volume");
        s.set_meta("mu_choice", "phi-volume");
        s.set_meta("rho1", physics.k.rho1);
        s.set_meta("rho2", physics.k.rho2);
        s.set_meta("sigma", physics.energy.sigma);
        s.set_meta("epsilon", physics.energy.epsilon);
        s
    }

    pub fn to_text(&self) -> String {
        let g = &self.grid;
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            g.dims(),
            g.nx(),
            g.ny(),
            g.lx(),
            g.ly()
        );
        let names: Vec<&str> = self.field_names().collect();
        let _ = writeln!(out, "fields {}", names.join(" "));
        let _ = writeln!(
            out,
            "# gauge: p is stored with zero mean, the physical pressure is p plus p_level"
        );
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k} = {v}");
        }
        for (name, f) in &self.fields {
            let _ = writeln!(out, "{name}");
            for row in f.data().chunks(g.nx()) {
                let line: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, magic) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
        if magic.trim() != MAGIC {
            return Err(bad(
                1,
                format!("expected `{MAGIC}`, got `{}`", magic.trim()),
            ));
        }
        let (ln, dims_line) = lines.next().ok_or_else(|| bad(2, "missing grid line"))?;
        let parts: Vec<&str> = dims_line.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(bad(ln, "grid line needs `dims nx ny lx ly`"));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| bad(ln, format!("bad number `{s}`")))
        };
        let int = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| bad(ln, format!("bad integer `{s}`")))
        };
        let (dims, nx, ny) = (int(parts[0])?, int(parts[1])?, int(parts[2])?);
        let (lx, ly) = (num(parts[3])?, num(parts[4])?);
        let grid = match dims {
            1 if ny == 1 => Grid::new_1d(nx, lx),
            2 => Grid::new_2d(nx, ny, lx, ly),
            _ => return Err(bad(ln, format!("unsupported dims {dims} with ny {ny}"))),
        }
        .map_err(|e| bad(ln, e.to_string()))?;
        let (ln, fields_line) = lines.next().ok_or_else(|| bad(3, "missing fields line"))?;
        let names: Vec<String> = match fields_line.strip_prefix("fields") {
            Some(rest) => rest.split_whitespace().map(str::to_string).collect(),
            None => return Err(bad(ln, "expected `fields <names>`")),
        };
        let mut snap = Snapshot::new(grid);
        let mut pending = names.iter();
        let mut current: Option<(String, Vec<f64>)> = None;
        let finish =
            |snap: &mut Snapshot, cur: Option<(String, Vec<f64>)>, ln: usize| -> Result<()> {
                if let Some((name, data)) = cur {
                    let n = data.len();
                    let f = ScalarField::from_vec(grid, data).map_err(|_| {
                        bad(
                            ln,
                            format!("field {name} has {n} values, expected {}", grid.len()),
                        )
                    })?;
                    snap.set_field(&name, f)?;
                }
                Ok(())
            };
        let mut last = ln;
        for (ln, line) in lines {
            last = ln;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(c) = t.strip_prefix('#') {
                if let Some((k, v)) = c.split_once('=') {
                    snap.set_meta(k.trim(), v.trim());
                }
                continue;
            }
            let starts_field = t.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && t.parse::<f64>().is_err();
            if starts_field {
                let expect = pending
                    .next()
                    .ok_or_else(|| bad(ln, format!("unexpected field `{t}`")))?;
                if expect != t {
                    return Err(bad(ln, format!("expected field `{expect}`, got `{t}`")));
                }
                finish(&mut snap, current.take(), ln)?;
                current = Some((t.to_string(), Vec::with_capacity(grid.len())));
                continue;
            }
            let (_, data) = current
                .as_mut()
                .ok_or_else(|| bad(ln, "values before any field name"))?;
            for tok in t.split_whitespace() {
                data.push(
                    tok.parse()
                        .map_err(|_| bad(ln, format!("bad value `{tok}`")))?,
                );
            }
        }
        finish(&mut snap, current.take(), last)?;
        if let Some(missing) = pending.next() {
            return Err(bad(last, format!("field `{missing}` listed but absent")));
        }
        Ok(snap)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }
}
