//! Subcommand dispatch for the `retiot` executable. Every command returns a
//! [`CommandOutcome`]; nothing here writes to the process streams.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use retiot_core::data::DataSet;
use retiot_core::docformat::{
    diff_versions, find_version, inspection_file_name, inspection_record_document, is_valid_label, parse_project,
    snapshot_version, template_document, write_project, write_snapshot, Diagnostic, MANIFEST_FILE,
};
use retiot_core::gates::{process_status, render_gate_reports, stage_gate};
use retiot_core::iia::check_catalog_completeness;
use retiot_core::inspection::{
    answer_sheet_document, applicable_questions, close_discrimination, parse_answer_sheet, parse_decisions,
    record_inspection, Answer, AnswerSheet, DefectStatus,
};
use retiot_core::literal::Literal;
use retiot_core::model::{allocate_id, validate_model, ArtifactKind, Identifier, Methodology, Project, TemplateKind, Verdict, VersionSnapshot};
use retiot_core::report::{coverage_audit, load_coverage_fixtures, render_document, render_inspection_record, RenderFormat};
use retiot_core::trace::{analyze_change_in, build_trace_graph, impact_paths, validate_links, ChangeKind, ChangeRequest, Direction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Label accepted by `diff` for the current working copy.
pub const WORKING_LABEL: &str = "working";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandOutcome {
    /// 0 clean, 1 findings, 2 usage or I/O error.
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    pub artifacts_written: Vec<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(name = "retiot", version, about = "Build, inspect and trace IoT requirements documents")]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Create an empty project directory.
    Init {
        dir: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        responsible: Option<String>,
        #[arg(long, value_enum, default_value_t = MethodologyArg::Traditional)]
        methodology: MethodologyArg,
    },
    /// Validate the model, trace links and arrangement catalogs.
    Check { dir: PathBuf },
    /// Record an inspection session over the project's IoT scenarios.
    Inspect {
        dir: PathBuf,
        #[arg(long, value_name = "FILE", conflicts_with = "interactive", required_unless_present = "interactive")]
        answers: Option<PathBuf>,
        #[arg(long)]
        interactive: bool,
        /// Store the inspection record (and, when interactive, the answer sheet) in the project.
        #[arg(long)]
        save: bool,
        #[arg(long)]
        session: Option<String>,
        #[arg(long)]
        inspector: Option<String>,
    },
    /// Apply discrimination meeting decisions to a recorded session.
    Meeting {
        dir: PathBuf,
        #[arg(long)]
        session: String,
        #[arg(long, value_name = "FILE")]
        decisions: PathBuf,
    },
    /// List the artifacts reachable from one artifact.
    Trace {
        dir: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
        direction: DirectionArg,
    },
    /// Analyze the impact of a change request.
    Change {
        dir: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value = "")]
        description: String,
    },
    /// Evaluate stage gates.
    Gate {
        dir: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        stage: Option<u8>,
        /// Evaluate as an agile project regardless of the recorded methodology.
        #[arg(long)]
        agile: bool,
    },
    /// Render one template of the project.
    Render {
        dir: PathBuf,
        #[arg(long)]
        template: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Compare template field sets against the information items.
    Audit {
        #[arg(long, value_name = "FILE")]
        fixtures: Option<PathBuf>,
    },
    /// Freeze the current model as a labelled version.
    Snapshot {
        dir: PathBuf,
        #[arg(long)]
        label: String,
    },
    /// Show the changes between two versions (`working` is the current model).
    Diff {
        dir: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodologyArg {
    Traditional,
    Agile,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirectionArg {
    Downstream,
    Upstream,
    Both,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Downstream => Direction::Downstream,
            DirectionArg::Upstream => Direction::Upstream,
            DirectionArg::Both => Direction::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Modify,
    Remove,
    Add,
}

impl From<KindArg> for ChangeKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Modify => ChangeKind::Modify,
            KindArg::Remove => ChangeKind::Remove,
            KindArg::Add => ChangeKind::Add,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Html,
}

/// Error path of a command: message for stderr, exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<CommandOutcome, Failure>;

fn outcome(exit_code: i32, stdout: String) -> Outcome {
    Ok(CommandOutcome {
        exit_code,
        stdout,
        ..CommandOutcome::default()
    })
}

/// Runs with standard input available to `inspect --interactive`.
pub fn run<I, S>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdin = std::io::stdin();
    let mut lock = stdin.lock();
    run_with_io(argv, &mut lock, &mut std::io::stderr())
}

/// Runs with scripted input; prompts are appended to `stderr`.
pub fn run_with_input<I, S>(argv: I, input: &mut dyn BufRead) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut prompts = Vec::new();
    let mut outcome = run_with_io(argv, input, &mut prompts);
    outcome.stderr = String::from_utf8_lossy(&prompts).into_owned() + &outcome.stderr;
    outcome
}

/// Interactive prompts go to `prompt` as they are asked.
pub fn run_with_io<I, S>(argv: I, input: &mut dyn BufRead, prompt: &mut dyn Write) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let text = err.render().to_string();
            return if err.use_stderr() {
                CommandOutcome {
                    exit_code: EXIT_ERROR,
                    stderr: text,
                    ..CommandOutcome::default()
                }
            } else {
                CommandOutcome {
                    exit_code: EXIT_OK,
                    stdout: text,
                    ..CommandOutcome::default()
                }
            };
        }
    };
    let data = DataSet::from_env();
    let mut result = match dispatch(cli.command, &data, input, prompt) {
        Ok(outcome) => outcome,
        Err(Failure(message)) => CommandOutcome {
            exit_code: EXIT_ERROR,
            stderr: format!("error: {message}\n"),
            ..CommandOutcome::default()
        },
    };
    if let Some(out) = cli.out {
        if result.exit_code != EXIT_ERROR {
            match fs::write(&out, &result.stdout) {
                Ok(()) => {
                    result.stdout.clear();
                    result.artifacts_written.push(out);
                }
                Err(e) => {
                    result.exit_code = EXIT_ERROR;
                    result.stderr.push_str(&format!("error: cannot write {}: {e}\n", out.display()));
                }
            }
        }
    }
    result
}

fn dispatch(command: Command, data: &DataSet, input: &mut dyn BufRead, prompt: &mut dyn Write) -> Outcome {
    match command {
        Command::Init {
            dir,
            name,
            responsible,
            methodology,
        } => init(&dir, name, responsible, methodology),
        Command::Check { dir } => check(&dir, data),
        Command::Inspect {
            dir,
            answers,
            interactive,
            save,
            session,
            inspector,
        } => inspect(&dir, data, answers.as_deref(), interactive, save, session, inspector, input, prompt),
        Command::Meeting { dir, session, decisions } => meeting(&dir, &session, &decisions),
        Command::Trace { dir, from, direction } => trace(&dir, &from, direction.into()),
        Command::Change {
            dir,
            target,
            kind,
            description,
        } => change(&dir, &target, kind.into(), description),
        Command::Gate { dir, stage, agile } => gate(&dir, data, stage, agile),
        Command::Render { dir, template, format } => render(&dir, &template, format),
        Command::Audit { fixtures } => audit(data, fixtures.as_deref()),
        Command::Snapshot { dir, label } => snapshot(&dir, &label),
        Command::Diff { dir, from, to } => diff(&dir, &from, &to),
    }
}

fn diagnostics_text(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("{d}\n")).collect()
}

/// Loads a project; parse errors abort every command except `check`.
fn load(dir: &Path) -> Result<(Project, String), Failure> {
    if !dir.join(MANIFEST_FILE).is_file() {
        return Err(Failure(format!("{} is not a project directory (no {MANIFEST_FILE})", dir.display())));
    }
    let (project, diags) = parse_project(dir);
    let errors = diags.iter().filter(|d| d.is_error()).count();
    if errors > 0 {
        return Err(Failure(format!(
            "{}project has {errors} parse error(s); run `retiot check` for details",
            diagnostics_text(&diags)
        )));
    }
    Ok((project, diagnostics_text(&diags)))
}

fn init(dir: &Path, name: Option<String>, responsible: Option<String>, methodology: MethodologyArg) -> Outcome {
    if dir.join(MANIFEST_FILE).exists() {
        return Err(Failure(format!("{} already holds a project", dir.display())));
    }
    let default_name = dir
        .file_name()
        .map(|n| n.to_string_lossy().to_string())
        .unwrap_or_else(|| "project".to_string());
    let project = Project {
        name: name.unwrap_or(default_name),
        responsible: responsible.unwrap_or_default(),
        methodology: match methodology {
            MethodologyArg::Traditional => Methodology::Traditional,
            MethodologyArg::Agile => Methodology::Agile,
        },
        ..Project::default()
    };
    fs::create_dir_all(dir)?;
    write_project(&project, dir)?;
    let mut out = outcome(EXIT_OK, format!("initialized project `{}` in {}\n", project.name, dir.display()))?;
    out.artifacts_written.push(dir.join(MANIFEST_FILE));
    Ok(out)
}

/// Findings of `check` in report order: diagnostics, model issues, link
/// issues, catalog issues.
pub fn check_findings(dir: &Path, data: &DataSet) -> Result<(Vec<String>, Vec<String>), String> {
    if !dir.is_dir() {
        return Err(format!("{} is not a directory", dir.display()));
    }
    let registry = data.registry().map_err(|e| e.to_string())?;
    let (project, diags) = parse_project(dir);
    let warnings = diags.iter().filter(|d| !d.is_error()).map(|d| d.to_string()).collect();
    let mut findings: Vec<String> = diags.iter().filter(|d| d.is_error()).map(|d| d.to_string()).collect();
    findings.extend(validate_model(&project).iter().map(|i| i.to_string()));
    findings.extend(validate_links(&build_trace_graph(&project)).iter().map(|i| i.to_string()));
    findings.extend(check_catalog_completeness(&project, &registry).iter().map(|i| i.to_string()));
    Ok((findings, warnings))
}

fn check(dir: &Path, data: &DataSet) -> Outcome {
    let (findings, warnings) = check_findings(dir, data).map_err(Failure)?;
    let mut stdout = String::new();
    for line in &findings {
        let _ = writeln!(stdout, "{line}");
    }
    let _ = writeln!(stdout, "{} issue{}", findings.len(), if findings.len() == 1 { "" } else { "s" });
    let mut out = outcome(if findings.is_empty() { EXIT_OK } else { EXIT_FINDINGS }, stdout)?;
    out.stderr = warnings.iter().map(|w| format!("{w}\n")).collect();
    Ok(out)
}

fn prompt_answers(
    project: &Project,
    questions: &[retiot_core::inspection::ChecklistQuestion],
    input: &mut dyn BufRead,
    transcript: &mut dyn Write,
) -> Result<Vec<Answer>, Failure> {
    let mut answers = Vec::new();
    let mut eof = false;
    for scenario in &project.scenarios {
        for q in applicable_questions(scenario, questions) {
            if eof {
                break;
            }
            loop {
                write!(transcript, "{} Q{} {}", scenario.id, q.number, q.text)?;
                if let Some(hint) = &q.hint {
                    write!(transcript, " ({hint})")?;
                }
                write!(transcript, " [y/n/na/skip, then optional note]: ")?;
                transcript.flush()?;
                let mut line = String::new();
                if input.read_line(&mut line)? == 0 {
                    eof = true;
                    writeln!(transcript)?;
                    break;
                }
                let line = line.trim();
                let (head, note) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                if head.is_empty() || head.eq_ignore_ascii_case("skip") {
                    break;
                }
                match Verdict::from_literal(head) {
                    Some(verdict) => {
                        answers.push(Answer {
                            question_number: q.number,
                            scenario_id: scenario.id,
                            verdict,
                            note: Some(note.trim().to_string()).filter(|n| !n.is_empty()),
                        });
                        break;
                    }
                    None => writeln!(transcript, "please answer y, n, na or skip")?,
                }
            }
        }
    }
    Ok(answers)
}

#[allow(clippy::too_many_arguments)]
fn inspect(
    dir: &Path,
    data: &DataSet,
    answers_file: Option<&Path>,
    interactive: bool,
    save: bool,
    session: Option<String>,
    inspector: Option<String>,
    input: &mut dyn BufRead,
    prompt: &mut dyn Write,
) -> Outcome {
    let (project, warnings) = load(dir)?;
    let questions = data.questions()?;
    let sheet = if interactive {
        let session = session.unwrap_or_else(|| format!("session-{}", project.inspections.len() + 1));
        AnswerSheet {
            session_label: session,
            inspector: inspector.unwrap_or_default(),
            answers: prompt_answers(&project, &questions, input, prompt)?,
        }
    } else {
        let path = answers_file.expect("clap requires --answers without --interactive");
        let text = fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
        let mut sheet = parse_answer_sheet(&text)?;
        if let Some(s) = session {
            sheet.session_label = s;
        }
        if let Some(i) = inspector {
            sheet.inspector = i;
        }
        sheet
    };
    if !is_valid_label(&sheet.session_label) {
        return Err(Failure(format!("`{}` is not a valid session label", sheet.session_label)));
    }
    let report = record_inspection(&project, &questions, &sheet.answers, &sheet.session_label, &sheet.inspector)?;
    let mut written = Vec::new();
    if save {
        if project.inspections.iter().any(|r| r.session_label == report.session_label) {
            return Err(Failure(format!("session `{}` is already recorded", report.session_label)));
        }
        let record = dir.join(inspection_file_name(&report.session_label));
        if let Some(parent) = record.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&record, inspection_record_document(&report).to_text())?;
        written.push(record);
        if interactive {
            let answers = dir.join(format!("answers-{}.retiot", report.session_label));
            fs::write(&answers, answer_sheet_document(&sheet).to_text())?;
            written.push(answers);
        }
    }
    let code = if report.defects.is_empty() { EXIT_OK } else { EXIT_FINDINGS };
    let mut out = outcome(code, render_inspection_record(&report))?;
    out.stderr = warnings;
    out.artifacts_written = written;
    Ok(out)
}

fn meeting(dir: &Path, session: &str, decisions: &Path) -> Outcome {
    let (project, warnings) = load(dir)?;
    let report = project
        .inspections
        .iter()
        .find(|r| r.session_label == session)
        .ok_or_else(|| Failure(format!("no recorded session `{session}`")))?;
    let text = fs::read_to_string(decisions).map_err(|e| Failure(format!("cannot read {}: {e}", decisions.display())))?;
    let closed = close_discrimination(report, &parse_decisions(&text)?)?;
    let open = closed.defects.iter().any(|d| d.status != DefectStatus::Corrected);
    let mut out = outcome(if open { EXIT_FINDINGS } else { EXIT_OK }, render_inspection_record(&closed))?;
    out.stderr = warnings;
    Ok(out)
}

fn parse_id(text: &str) -> Result<Identifier, Failure> {
    text.parse::<Identifier>().map_err(Failure::from)
}

fn trace(dir: &Path, from: &str, direction: Direction) -> Outcome {
    let (project, warnings) = load(dir)?;
    let id = parse_id(from)?;
    let graph = build_trace_graph(&project);
    let paths = impact_paths(&graph, &id, direction)?;
    let mut stdout = String::new();
    for (node, reach) in &paths {
        let _ = writeln!(stdout, "{node}\t{}\t{}", reach.direction, reach.via);
    }
    let _ = writeln!(stdout, "{} artifact{} reachable from {id}", paths.len(), if paths.len() == 1 { "" } else { "s" });
    let mut out = outcome(EXIT_OK, stdout)?;
    out.stderr = warnings;
    Ok(out)
}

/// The change analysis report for one request, as the CLI prints it.
pub fn change_report_text(project: &Project, target: Identifier, kind: ChangeKind, description: String) -> Result<(String, bool), String> {
    let change = ChangeRequest {
        id: allocate_id(project, ArtifactKind::ChangeRequest),
        target_id: target,
        kind,
        description,
    };
    let report = analyze_change_in(project, &change, Direction::Both).map_err(|e| e.to_string())?;
    let blocking = !report.blocking_ids().is_empty();
    let mut view = project.clone();
    view.change_reports = vec![report];
    let doc = template_document(&view, TemplateKind::ChangeAnalysisReport, WORKING_LABEL).expect("one change report present");
    Ok((doc.to_text(), blocking))
}

fn change(dir: &Path, target: &str, kind: ChangeKind, description: String) -> Outcome {
    let (project, warnings) = load(dir)?;
    let (text, blocking) = change_report_text(&project, parse_id(target)?, kind, description).map_err(Failure)?;
    let mut out = outcome(if blocking { EXIT_FINDINGS } else { EXIT_OK }, text)?;
    out.stderr = warnings;
    Ok(out)
}

fn gate(dir: &Path, data: &DataSet, stage: Option<u8>, agile: bool) -> Outcome {
    let (mut project, warnings) = load(dir)?;
    if agile {
        project.methodology = Methodology::Agile;
    }
    let config = data.gate_config_for(Some(dir))?;
    let reports = match stage {
        Some(s) => vec![stage_gate(&project, s, &config)],
        None => process_status(&project, &config),
    };
    let ready = reports.iter().all(|r| r.ready);
    let mut out = outcome(if ready { EXIT_OK } else { EXIT_FINDINGS }, render_gate_reports(&reports))?;
    out.stderr = warnings;
    Ok(out)
}

fn render(dir: &Path, template: &str, format: FormatArg) -> Outcome {
    let (project, warnings) = load(dir)?;
    let kind: TemplateKind = template.parse()?;
    let format = match format {
        FormatArg::Text => RenderFormat::PlainText,
        FormatArg::Html => RenderFormat::Html,
    };
    let mut out = outcome(EXIT_OK, render_document(&project, kind, format)?)?;
    out.stderr = warnings;
    Ok(out)
}

fn audit(data: &DataSet, fixtures: Option<&Path>) -> Outcome {
    let sets = match fixtures {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
            load_coverage_fixtures(&text)?
        }
        None => data.fixtures()?,
    };
    outcome(EXIT_OK, coverage_audit(&sets)?.render())
}

fn snapshot(dir: &Path, label: &str) -> Outcome {
    let (mut project, warnings) = load(dir)?;
    if label == WORKING_LABEL {
        return Err(Failure(format!("`{WORKING_LABEL}` names the current model and cannot be a version label")));
    }
    snapshot_version(&mut project, label)?;
    write_snapshot(&project, label, dir)?;
    let mut out = outcome(EXIT_OK, format!("snapshot `{label}` written\n"))?;
    out.stderr = warnings;
    out.artifacts_written.push(dir.join(retiot_core::docformat::VERSIONS_DIR).join(label));
    Ok(out)
}

fn version(project: &Project, label: &str) -> Result<VersionSnapshot, Failure> {
    if label == WORKING_LABEL {
        let mut copy = project.clone();
        copy.versions.clear();
        return Ok(VersionSnapshot {
            label: WORKING_LABEL.into(),
            project: Box::new(copy),
        });
    }
    Ok(find_version(project, label)?.clone())
}

fn diff(dir: &Path, from: &str, to: &str) -> Outcome {
    let (project, warnings) = load(dir)?;
    let changes = diff_versions(&version(&project, from)?, &version(&project, to)?);
    let mut stdout = changes.to_text();
    if changes.is_empty() {
        let _ = writeln!(stdout, "no differences between {from} and {to}");
    }
    let mut out = outcome(if changes.is_empty() { EXIT_OK } else { EXIT_FINDINGS }, stdout)?;
    out.stderr = warnings;
    Ok(out)
}
