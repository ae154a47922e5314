use std::io::{BufRead, Write};

use setlog::engine::Engine;
use setlog::syntax::{Printer, Query};

use crate::{ERROR_PREFIX, PROMPT};

/// Interactive session state: the engine plus presentation flags.
pub struct Session {
    pub engine: Engine,
    pub golden: bool,
}

impl Session {
    pub fn new(engine: Engine) -> Self {
        Session { engine, golden: false }
    }

    fn printer(&self) -> Printer {
        Printer::answer(self.golden)
    }
}

/// Reads one query, which may span several lines and ends with a dot.
/// Returns `None` at end of input.
fn read_query<R: BufRead>(input: &mut R) -> std::io::Result<Option<String>> {
    let mut text = String::new();
    loop {
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            return Ok(if text.trim().is_empty() { None } else { Some(text) });
        }
        let code = match line.find('%') {
            Some(i) => &line[..i],
            None => &line,
        };
        text.push_str(code);
        text.push('\n');
        if text.trim_end().ends_with('.') {
            return Ok(Some(text));
        }
    }
}

fn ask_more<R: BufRead, W: Write>(input: &mut R, out: &mut W) -> std::io::Result<bool> {
    write!(out, "\n\nAnother solution? (y/n) ")?;
    out.flush()?;
    let mut line = String::new();
    if input.read_line(&mut line)? == 0 {
        writeln!(out)?;
        return Ok(false);
    }
    Ok(line.trim().eq_ignore_ascii_case("y"))
}

/// Runs the read-eval-print loop until `halt.` or end of input.
pub fn run<R: BufRead, W: Write>(session: &mut Session, mut input: R, mut out: W) -> std::io::Result<()> {
    loop {
        write!(out, "{}", PROMPT)?;
        out.flush()?;
        let text = match read_query(&mut input)? {
            Some(t) => t,
            None => {
                writeln!(out)?;
                return Ok(());
            }
        };
        writeln!(out)?;
        let query = match session.engine.parse_query(&text) {
            Ok(q) => q,
            Err(e) => {
                writeln!(out, "{}{}\n", ERROR_PREFIX, e)?;
                continue;
            }
        };
        match query {
            Query::Halt => return Ok(()),
            Query::Command(d) => {
                if let Err(e) = session.engine.directive(d, None) {
                    writeln!(out, "{}{}\n", ERROR_PREFIX, e)?;
                }
            }
            Query::Goal(goal) => {
                let printer = session.printer();
                let mut answers = match session.engine.solve(&goal) {
                    Ok(s) => s,
                    Err(e) => {
                        writeln!(out, "{}{}\n", ERROR_PREFIX, e)?;
                        continue;
                    }
                };
                loop {
                    match answers.next() {
                        None => {
                            writeln!(out, "no\n")?;
                            break;
                        }
                        Some(Err(e)) => {
                            writeln!(out, "{}{}\n", ERROR_PREFIX, e)?;
                            break;
                        }
                        Some(Ok(a)) => {
                            write!(out, "{}", a.render(&printer))?;
                            if !ask_more(&mut input, &mut out)? {
                                writeln!(out)?;
                                break;
                            }
                            writeln!(out)?;
                        }
                    }
                }
            }
        }
    }
}
