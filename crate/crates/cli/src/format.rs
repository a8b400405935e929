//! Deterministic text output: `%.12g` floats, CSV with LF endings, JSON
//! with the same rounding.

use serde_json::{Map, Value};

pub const SIGNIFICANT: usize = 12;

/// C-style `%.{digits}g`.
pub fn fmt_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let digits = digits.max(1);
    // rounding happens here, so the exponent already reflects carries like 9.99 -> 10.0
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits, as a JSON number.
pub fn json_float(x: f64) -> Value {
    let rounded: f64 = fmt_g(x, SIGNIFICANT).parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Float(f64),
    Int(i64),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Float(x) => fmt_g(*x, SIGNIFICANT),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Float(x) => json_float(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(i: $t) -> Self {
                Cell::Int(i as i64)
            }
        }
    )*};
}
int_cell!(u32, usize, i64);

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// One object per row, keys in column order.
    pub fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().zip(row).map(|(c, cell)| (c.to_string(), cell.json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.968624, "0.968624"),
            (30.0 / 31.0, "0.967741935484"),
            (1.0, "1"),
            (-0.0084551234567891, "-0.00845512345679"),
            (1e-5, "1e-05"),
            (0.00012345, "0.00012345"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (9.9999999999999e-5, "0.0001"),
            (2.5e-17, "2.5e-17"),
            (0.0, "0"),
        ];
        for (x, s) in cases {
            assert_eq!(fmt_g(x, 12), s, "{x:e}");
        }
        assert_eq!(fmt_g(0.00276378, 3), "0.00276");
        assert_eq!(fmt_g(f64::NAN, 12), "nan");
    }

    #[test]
    fn csv_quoting_and_line_endings() {
        let mut t = Table::new(vec!["a", "b", "c"]);
        t.push(vec![Cell::text("x,y"), Cell::Float(0.5), Cell::Empty]);
        t.push(vec![Cell::text("15/16"), Cell::Bool(true), Cell::Int(-3)]);
        assert_eq!(t.to_csv(), "a,b,c\n\"x,y\",0.5,\n15/16,true,-3\n");
    }

    #[test]
    fn json_rows_keep_column_order() {
        let mut t = Table::new(vec!["z", "a"]);
        t.push(vec![Cell::Float(1.0 / 3.0), Cell::Empty]);
        assert_eq!(serde_json::to_string(&t.json_rows()).unwrap(), r#"[{"z":0.333333333333,"a":null}]"#);
    }
}
