use std::collections::BTreeMap;
use std::fmt::Write;

use crate::exactalg::BigradedDims;

/// Homology plotted with `i` across and `j - i` up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    cells: BTreeMap<(i64, i64), usize>,
    cols: (i64, i64),
    rows: (i64, i64),
}

const CELL: i64 = 40;

impl Grid {
    pub fn new(d: &BigradedDims) -> Self {
        let cells: BTreeMap<(i64, i64), usize> = d.iter().map(|((i, j), n)| ((i, j - i), n)).collect();
        let xs = cells.keys().map(|c| c.0);
        let ys = cells.keys().map(|c| c.1);
        let cols = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
        let rows = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
        Grid { cells, cols, rows }
    }

    /// Occupied cells as `(i, j - i, dim)`.
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64, usize)> + '_ {
        self.cells.iter().map(|(&(x, y), &n)| (x, y, n))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from(" j-i\n");
        for y in (self.rows.0..=self.rows.1).rev() {
            let mut line = format!("{y:>4} |");
            for x in self.cols.0..=self.cols.1 {
                match self.cells.get(&(x, y)) {
                    None => line.push_str("   "),
                    Some(1) => line.push_str("  •"),
                    Some(n) => write!(line, "{n:>3}").unwrap(),
                }
            }
            s.push_str(line.trim_end());
            s.push('\n');
        }
        let width = (self.cols.1 - self.cols.0 + 1) as usize;
        s.push_str(&format!("     +{}\n", "-".repeat(3 * width)));
        let mut labels = String::from("      ");
        for x in self.cols.0..=self.cols.1 {
            write!(labels, "{x:>3}").unwrap();
        }
        s.push_str(&labels);
        s.push_str("  i\n");
        s
    }

    pub fn to_svg(&self) -> String {
        let ncols = self.cols.1 - self.cols.0 + 1;
        let nrows = self.rows.1 - self.rows.0 + 1;
        let (w, h) = ((ncols + 2) * CELL, (nrows + 2) * CELL);
        let px = |x: i64| (x - self.cols.0 + 1) * CELL + CELL / 2;
        let py = |y: i64| (self.rows.1 - y + 1) * CELL;
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
        );
        let (x0, y1) = (CELL, (nrows + 1) * CELL);
        writeln!(s, "<path d=\"M{x0} {} V{y1} H{}\" stroke=\"black\" fill=\"none\"/>", CELL / 2, w - CELL / 2).unwrap();
        for x in self.cols.0..=self.cols.1 {
            writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{x}</text>", px(x), y1 + 16)
                .unwrap();
        }
        for y in self.rows.0..=self.rows.1 {
            writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"12\">{y}</text>", x0 - 6, py(y) + 4)
                .unwrap();
        }
        writeln!(s, "<text x=\"{}\" y=\"{}\" font-size=\"12\">i</text>", w - CELL / 2 + 4, y1 + 4).unwrap();
        writeln!(s, "<text x=\"{}\" y=\"{}\" font-size=\"12\">j-i</text>", x0 - 12, CELL / 2 - 6).unwrap();
        for (x, y, n) in self.cells() {
            writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"black\"/>", px(x), py(y)).unwrap();
            if n > 1 {
                writeln!(s, "<text x=\"{}\" y=\"{}\" font-size=\"10\">{n}</text>", px(x) + 7, py(y) - 7).unwrap();
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_text() {
        let g = Grid::new(&BigradedDims::ones([(0, 2), (2, 6), (3, 8)]));
        let want = " j-i\n   5 |           •\n   4 |        •\n   3 |\n   2 |  •\n     +------------\n        0  1  2  3  i\n";
        assert_eq!(g.to_text(), want);
    }

    #[test]
    fn multiplicities_and_svg() {
        let g = Grid::new(&BigradedDims::from_entries([((0, 0), 2), ((1, 2), 1)]));
        assert!(g.to_text().contains("   0 |  2"));
        let svg = g.to_svg();
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }
}
