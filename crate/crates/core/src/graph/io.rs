//! Plain-text edge lists.
//!
//! ```text
//! n d
//! u v [sign]
//! ```
//!
//! One line per undirected edge, loops written `v v`. Signs are optional and
//! default to `+1`. Writers sort lines by `(min endpoint, max endpoint, edge id)`.
//! Blank lines and lines starting with `#` are ignored on input.

use std::io::{BufRead, Write};

use super::{named, Graph, Multigraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListFile {
    pub n: usize,
    pub d: usize,
    pub edges: Vec<(usize, usize)>,
    /// Present when at least one line carried a sign.
    pub signs: Option<Vec<i8>>,
}

impl EdgeListFile {
    pub fn graph(&self) -> Result<Graph> {
        Graph::new(self.n, &self.edges)
    }

    /// Ports are assigned per vertex in line order.
    pub fn multigraph(&self) -> Result<Multigraph> {
        named::regular(self.n, self.d, &self.edges)
    }

    pub fn signs_or_plus(&self) -> Vec<i8> {
        self.signs
            .clone()
            .unwrap_or_else(|| vec![1; self.edges.len()])
    }
}

pub fn write_edge_list<W: Write>(
    mut out: W,
    g: &Graph,
    d: usize,
    signs: Option<&[i8]>,
) -> Result<()> {
    if let Some(s) = signs {
        if s.len() != g.edge_count() {
            return Err(Error::InsufficientBits {
                needed: g.edge_count(),
                got: s.len(),
            });
        }
    }
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&e| {
        let (u, v) = g.endpoints(e);
        (u.min(v), u.max(v), e)
    });
    writeln!(out, "{} {}", g.vertex_count(), d)?;
    for e in order {
        let (u, v) = g.endpoints(e);
        match signs {
            Some(s) => writeln!(out, "{} {} {}", u.min(v), u.max(v), s[e])?,
            None => writeln!(out, "{} {}", u.min(v), u.max(v))?,
        }
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<EdgeListFile> {
    let mut header = None;
    let mut edges = Vec::new();
    let mut signs = Vec::new();
    let mut any_sign = false;
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("{s:?}: {e}"),
            })
        };
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "header must be `n d`".into(),
                    });
                }
                header = Some((parse(fields[0])?, parse(fields[1])?));
            }
            Some((n, _)) => {
                if !(2..=3).contains(&fields.len()) {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "edge line must be `u v [sign]`".into(),
                    });
                }
                let (u, v) = (parse(fields[0])?, parse(fields[1])?);
                if u >= n || v >= n {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("endpoint out of range 0..{n}"),
                    });
                }
                let sign = match fields.get(2) {
                    None => 1,
                    Some(&"1") | Some(&"+1") | Some(&"+") => {
                        any_sign = true;
                        1
                    }
                    Some(&"-1") | Some(&"-") => {
                        any_sign = true;
                        -1
                    }
                    Some(other) => {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("bad sign {other:?}"),
                        })
                    }
                };
                edges.push((u, v));
                signs.push(sign);
            }
        }
    }
    let (n, d) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing header".into(),
    })?;
    Ok(EdgeListFile {
        n,
        d,
        edges,
        signs: any_sign.then_some(signs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_is_sorted_and_rereads() {
        let g = named::petersen();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g, 3, None).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("10 3\n0 1\n0 4\n0 5\n"));
        let file = read_edge_list(&buf[..]).unwrap();
        assert_eq!(file.signs, None);
        let h = file.multigraph().unwrap();
        assert_eq!(h.adjacency_matrix(), g.adjacency_matrix());
        // Writing the reread graph is byte-identical.
        let mut again = Vec::new();
        write_edge_list(&mut again, &h, 3, None).unwrap();
        assert_eq!(again, buf);
    }

    #[test]
    fn signs_and_loops() {
        let text = "# comment\n2 3\n0 0 -1\n0 1\n1 1 +1\n";
        let f = read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(f.signs, Some(vec![-1, 1, 1]));
        let g = f.multigraph().unwrap();
        assert_eq!(g.multiplicity(0, 0), 2);
        assert_eq!(g.degree(1), 3);
    }

    #[test]
    fn parse_errors() {
        assert!(read_edge_list("".as_bytes()).is_err());
        assert!(read_edge_list("2 1\n0 5\n".as_bytes()).is_err());
        assert!(read_edge_list("2 1\n0 1 x\n".as_bytes()).is_err());
        let f = read_edge_list("3 2\n0 1\n".as_bytes()).unwrap();
        assert!(f.multigraph().is_err());
    }
}
