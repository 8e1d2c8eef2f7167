//! Answer evaluation requests for a benchmark function, one line at a time.
//! Handy as a stand-in simulator for `run --oracle`.

use std::io::{BufRead, Write};

use linewalker::benchmarks::BenchmarkFunction;

/// The reply line (without newline) for one request line.
pub fn answer(f: &BenchmarkFunction, line: &str) -> String {
    let coords: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
    match coords {
        Err(e) => format!("ERROR cannot parse `{}`: {e}", line.trim()),
        Ok(x) if x.is_empty() => "ERROR empty request".to_string(),
        Ok(x) => match f.evaluate_point(&x) {
            Ok(v) => format!("{v:?}"),
            Err(e) => format!("ERROR {e}"),
        },
    }
}

pub fn serve(f: &BenchmarkFunction, input: impl BufRead, mut output: impl Write) -> std::io::Result<()> {
    for line in input.lines() {
        let line = line?;
        writeln!(output, "{}", answer(f, &line))?;
        output.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use linewalker::benchmarks::lookup;

    #[test]
    fn answers_one_and_two_dimensional_requests() {
        let plateau = lookup("plateau").unwrap();
        assert_eq!(answer(plateau, "-2 -7"), "9.0");
        assert_eq!(answer(lookup("rastrigin").unwrap(), "0.0"), "0.0");
        assert!(answer(plateau, "1 2 3").starts_with("ERROR"));
        assert!(answer(plateau, "abc").starts_with("ERROR"));
        assert!(answer(lookup("rastrigin").unwrap(), "99").starts_with("ERROR"));
    }

    #[test]
    fn serves_line_by_line() {
        let f = lookup("rastrigin").unwrap();
        let mut out = Vec::new();
        serve(f, &b"0.0\n\n1.0\n"[..], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "0.0");
        assert!(lines[1].starts_with("ERROR"));
        assert!((lines[2].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    }
}
