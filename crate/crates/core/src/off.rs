//! Reading and writing ASCII OFF files.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::polyhedron::{ConvexPolyhedron, DEFAULT_TOL};
use crate::vec3::Vec3;

/// Raw OFF contents: vertex coordinates and facet index loops.
#[derive(Debug, Clone, PartialEq)]
pub struct OffMesh {
    pub vertices: Vec<Vec3>,
    pub facets: Vec<Vec<usize>>,
}

/// Token stream over OFF text that skips comments and tracks line numbers.
struct Tokens<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    current: Vec<&'a str>,
    pos: usize,
    line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Tokens {
            lines: text.lines().enumerate().peekable(),
            current: Vec::new(),
            pos: 0,
            line: 0,
        }
    }

    /// Advances to the next non-empty line and returns all of its tokens.
    fn next_line(&mut self) -> Option<Vec<&'a str>> {
        for (i, l) in self.lines.by_ref() {
            let content = l.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            if !toks.is_empty() {
                self.line = i + 1;
                return Some(toks);
            }
        }
        None
    }

    fn next(&mut self) -> Option<&'a str> {
        while self.pos >= self.current.len() {
            self.current = self.next_line()?;
            self.pos = 0;
        }
        self.pos += 1;
        Some(self.current[self.pos - 1])
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn parse<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let tok = self
            .next()
            .ok_or_else(|| self.err(format!("unexpected end of file, expected {what}")))?;
        tok.parse()
            .map_err(|_| self.err(format!("invalid {what}: {tok:?}")))
    }
}

/// Parses OFF text. The edge count in the header is ignored (0 is accepted).
pub fn parse_off(text: &str) -> Result<OffMesh> {
    let mut t = Tokens::new(text);
    let header = t.next().ok_or_else(|| t.err("empty file"))?;
    if header != "OFF" {
        return Err(t.err(format!("expected OFF header, found {header:?}")));
    }
    let nv: usize = t.parse("vertex count")?;
    let nf: usize = t.parse("facet count")?;
    let _ne: usize = t.parse("edge count")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let x: f64 = t.parse("coordinate")?;
        let y: f64 = t.parse("coordinate")?;
        let z: f64 = t.parse("coordinate")?;
        let v = Vec3::new(x, y, z);
        if !v.is_finite() {
            return Err(t.err("non-finite coordinate"));
        }
        vertices.push(v);
    }
    let mut facets = Vec::with_capacity(nf);
    for _ in 0..nf {
        // Facet lines are read whole so trailing color values can be ignored.
        t.pos = t.current.len();
        let k: usize = t.parse("facet size")?;
        if k < 3 {
            return Err(t.err(format!("facet with {k} vertices")));
        }
        let mut f = Vec::with_capacity(k);
        for _ in 0..k {
            let i: usize = t.parse("vertex index")?;
            if i >= nv {
                return Err(t.err(format!("vertex index {i} out of range")));
            }
            f.push(i);
        }
        facets.push(f);
    }
    Ok(OffMesh { vertices, facets })
}

/// Parses OFF text into a validated convex polyhedron.
pub fn read_off(text: &str) -> Result<ConvexPolyhedron> {
    let mesh = parse_off(text)?;
    ConvexPolyhedron::from_facets(mesh.vertices, mesh.facets, DEFAULT_TOL)
}

/// Serializes a polyhedron as OFF with facets counterclockwise from outside.
/// Coordinates use the shortest representation that round-trips exactly.
pub fn write_off(p: &ConvexPolyhedron) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "OFF");
    let _ = writeln!(s, "{} {} {}", p.num_vertices(), p.num_facets(), p.edges().len());
    for v in p.vertices() {
        let _ = writeln!(s, "{:?} {:?} {:?}", v.x, v.y, v.z);
    }
    for f in p.facets() {
        let _ = write!(s, "{}", f.len());
        for k in f {
            let _ = write!(s, " {k}");
        }
        s.push('\n');
    }
    s
}
