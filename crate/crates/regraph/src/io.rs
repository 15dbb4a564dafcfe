//! Plain edge-list files: a first line `n m`, then `m` lines `u v` with
//! 1-based vertex ids. Blank lines and `#` comments are skipped.

use std::fs;
use std::io::Write;
use std::path::Path;

use regraph_core::{Pattern, SimpleGraph};

use crate::error::{HarnessError, HarnessResult};

pub fn parse_edge_list(text: &str, path: &Path) -> HarnessResult<SimpleGraph> {
    let err = |line: usize, message: String| HarnessError::Parse { path: path.to_path_buf(), line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing `n m` header".into()))?;
    let nums = |line: usize, l: &str| -> HarnessResult<Vec<usize>> {
        l.split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| err(line, format!("`{t}` is not a nonnegative integer"))))
            .collect()
    };
    let head = nums(hline, header)?;
    let [n, m] = head[..] else {
        return Err(err(hline, "header must be `n m`".into()));
    };
    let mut g = SimpleGraph::empty(n);
    let mut seen = 0;
    for (line, l) in lines {
        let pair = nums(line, l)?;
        let [u, v] = pair[..] else {
            return Err(err(line, "edge lines must be `u v`".into()));
        };
        if u == 0 || v == 0 || u > n || v > n {
            return Err(err(line, format!("vertex out of range 1..={n}")));
        }
        g.add_edge(u - 1, v - 1).map_err(|e| err(line, e.message().to_string()))?;
        seen += 1;
    }
    if seen != m {
        return Err(err(hline, format!("header promises {m} edges, found {seen}")));
    }
    Ok(g)
}

pub fn format_edge_list(g: &SimpleGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.lo() + 1, e.hi() + 1));
    }
    out
}

pub fn read_graph(path: &Path) -> HarnessResult<SimpleGraph> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_edge_list(&text, path)
}

/// A pattern file uses the same format; `n` is the pattern's vertex count.
pub fn read_pattern(path: &Path) -> HarnessResult<Pattern> {
    Ok(Pattern::from_graph(&read_graph(path)?)?)
}

pub fn write_graph(path: &Path, g: &SimpleGraph) -> HarnessResult<()> {
    fs::write(path, format_edge_list(g)).map_err(|e| HarnessError::io(path, e))
}

/// Several graphs into one stream, separated by blank lines.
pub fn write_graphs<W: Write>(mut w: W, graphs: &[SimpleGraph]) -> std::io::Result<()> {
    for (i, g) in graphs.iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
        }
        w.write_all(format_edge_list(g).as_bytes())?;
    }
    Ok(())
}
