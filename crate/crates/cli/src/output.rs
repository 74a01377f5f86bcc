//! CSV text helpers: `# config:` metadata lines and real-number formatting.

use std::fmt::Write as _;

/// `%.17g`-style rendering: 17 significant digits, trailing zeros trimmed,
/// exponent form outside `[1e-5, 1e17)`. NaN renders as `nan`.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs());
    }
    let decimals = (16 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".into(), fmt_real)
}

/// Builds a CSV document with LF endings.
#[derive(Debug, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(config: &[String]) -> Self {
        let mut csv = Csv::default();
        writeln!(csv.text, "# config: {}", config.join(" ")).unwrap();
        csv
    }

    pub fn comment(&mut self, line: &str) -> &mut Self {
        writeln!(self.text, "# {line}").unwrap();
        self
    }

    pub fn row<I, S>(&mut self, fields: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.text.push(',');
            }
            self.text.push_str(f.as_ref());
            first = false;
        }
        self.text.push('\n');
        self
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Echo of resolved settings, rendered back as command-line flags.
#[derive(Debug, Clone, Default)]
pub struct ConfigEcho(Vec<String>);

impl ConfigEcho {
    pub fn new(subcommand: &str) -> Self {
        ConfigEcho(vec![subcommand.to_string()])
    }

    pub fn flag(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.0.push(format!("--{name}"));
        self.0.push(value.to_string());
        self
    }

    pub fn list(&mut self, name: &str, values: &[f64]) -> &mut Self {
        let joined = values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        self.flag(name, joined)
    }

    pub fn args(&self) -> &[String] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_real(0.1), "0.10000000000000001");
        assert_eq!(fmt_real(-1.0), "-1");
        assert_eq!(fmt_real(6.25), "6.25");
        assert_eq!(fmt_real(100.0), "100");
        assert_eq!(fmt_real(1e-7), "9.9999999999999995e-08");
        assert_eq!(fmt_real(1.5e20), "1.5e+20");
        assert_eq!(fmt_real(f64::NAN), "nan");
        assert_eq!(fmt_real(0.0), "0");
        for x in [0.1, 1.0 / 3.0, -0.008_695_286_693_581_8, 123_456.789, 2.5e-6] {
            assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(&["simulate".into(), "--games".into(), "3".into()]);
        csv.row(["step", "x"]).row(["0", "1"]);
        assert_eq!(csv.into_string(), "# config: simulate --games 3\nstep,x\n0,1\n");
    }
}
