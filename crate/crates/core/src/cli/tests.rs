use super::*;
use crate::samples::*;

struct Files(tempfile::TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn put(&self, name: &str, body: &str) -> String {
        let p = self.0.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).to_string_lossy().into_owned()
    }
}

fn pca_with(condition: &str) -> String {
    let head = PROPERTY_PCA.split("[condition G1]").next().unwrap();
    format!("{head}[condition G1]\n{condition}")
}

#[test]
fn check_priority_exit_codes() {
    let f = Files::new();
    let r = cmd_check_priority(&f.put("loop.txt", SELF_LOOP_CONDITION));
    assert_eq!(r.exit_code, EXIT_OK);
    assert!(r.text.contains("0-priority under any ordering"));

    let r = cmd_check_priority(&f.put("pat.txt", SELF_PATTERN_CONDITION));
    assert_eq!(r.exit_code, EXIT_NEGATIVE);
    assert!(r.text.contains("pattern ((b,0),(b,0))"), "{}", r.text);

    let r = cmd_check_priority(&f.put("prop.txt", PROPERTY_CONDITION));
    assert_eq!(r.exit_code, EXIT_OK);
    assert!(r.text.contains("ordering: a b"));
    assert!(r.text.contains("Acyc_1"));

    let r = cmd_check_priority(&f.put("bad.txt", "alphabet: a\nstates q0\n"));
    assert_eq!(r.exit_code, EXIT_INPUT);
    assert_eq!(cmd_check_priority(&f.path("missing")).exit_code, EXIT_INPUT);
}

#[test]
fn member_lines_and_errors() {
    let f = Files::new();
    let pca = f.put("p.txt", PROPERTY_PCA);
    let words = f.put("w.txt", "a:1 b:2 a:1\na:1 a:1\n# comment\na:1 b:1 a:1\n");
    let r = cmd_member(&pca, &words);
    assert_eq!(r.text, "accept a:1 b:2 a:1\nreject a:1 a:1\nreject a:1 b:1 a:1\n");
    assert_eq!(r.exit_code, EXIT_NEGATIVE);

    let r = cmd_member(&f.put("u.txt", UNIVERSAL_PCA), &words);
    assert_eq!(r.exit_code, EXIT_OK);
    assert!(r.text.lines().all(|l| l.starts_with("accept")));

    let r = cmd_member(&pca, &f.put("bad.txt", "a:1\na:x\n"));
    assert_eq!(r.exit_code, EXIT_INPUT);
    assert!(r.text.contains("line 2"), "{}", r.text);

    let r = cmd_member(&pca, &f.put("c.txt", "c:1\n"));
    assert_eq!(r.exit_code, EXIT_INPUT);
}

#[test]
fn compile_writes_machine_and_layout() {
    let f = Files::new();
    let out = f.path("m.txt");
    let r = cmd_compile(&f.put("p.txt", PROPERTY_PCA), &out, None);
    assert_eq!(r.exit_code, EXIT_OK, "{}", r.text);
    assert_eq!(r.payload["validate_priority"], true);
    let m = CounterMachine::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.payload["counters"], m.num_counters());
    assert!(std::fs::read_to_string(format!("{out}.layout")).unwrap().contains("counter 1: scratch"));

    let r = cmd_compile(&f.put("d.txt", DATA_AUTOMATON), &out, Some(&f.path("d.layout")));
    assert_eq!(r.exit_code, EXIT_OK, "{}", r.text);
    assert_eq!(r.payload["drain_prefix_tests"], 0);

    let r = cmd_compile(&f.put("bad.txt", &pca_with(SELF_PATTERN_CONDITION)), &out, None);
    assert_eq!(r.exit_code, EXIT_NEGATIVE);
    assert!(r.text.contains("condition G1"), "{}", r.text);
}

#[test]
fn explore_verdicts() {
    let f = Files::new();
    let r = cmd_explore(&f.put("u.txt", UNIVERSAL_PCA), ExploreBounds::default());
    assert_eq!(r.exit_code, EXIT_OK);
    assert_eq!(r.payload["witnesses"][0], "a:1");

    let r = cmd_explore(&f.put("m.txt", ANBN_MACHINE), ExploreBounds::default());
    assert_eq!(r.exit_code, EXIT_OK);
    assert_eq!(r.payload["witnesses"], json!(["a b", "a a b b"]));

    let empty = "alphabet: a\ncounters: 1\ninitial: q\naccepting: r\ntrans: q a dec 1 r\n";
    let r = cmd_explore(&f.put("e.txt", empty), ExploreBounds::default());
    assert_eq!(r.exit_code, EXIT_NEGATIVE);
    assert!(r.text.contains("empty up to bound"));

    let pump = "alphabet: a\ncounters: 1\ninitial: q\naccepting: r\ntrans: q eps inc 1 q\ntrans: q a dec 1 s\ntrans: s a inc 1 t\ntrans: t a ifzp 1 r\n";
    let r = cmd_explore(&f.put("p.txt", pump), ExploreBounds { max_len: 2, sum_bound: 3, steps: 100 });
    assert_eq!(r.exit_code, EXIT_UNKNOWN, "{}", r.text);

    assert_eq!(cmd_explore(&f.put("x.txt", "garbage line\n"), ExploreBounds::default()).exit_code, EXIT_INPUT);
}

#[test]
fn program_reachability() {
    let f = Files::new();
    let p = f.put("prog.txt", PROPERTY_PROGRAM);
    let r = cmd_program(&p, "b1=true b2=false b3=false", 4, PathChoice::Auto);
    assert_eq!(r.exit_code, EXIT_OK);
    assert_eq!(r.payload["witness"], "b:1");
    assert_eq!(r.payload["solver_path"], "automaton");
    assert!(r.text.contains("classification: 0-priority restricted ND2"));

    let r = cmd_program(&p, "b3=true", 4, PathChoice::Auto);
    assert_eq!(r.payload["witness"], "a:1 a:1");

    let r = cmd_program(&p, "b1=true b2=true", 3, PathChoice::Auto);
    assert_eq!(r.exit_code, EXIT_NEGATIVE);

    let loop_free = f.put("lf.txt", "sigma: a b\nx := true");
    let r = cmd_program(&loop_free, "x=true", 2, PathChoice::Automaton);
    assert_eq!(r.exit_code, EXIT_INPUT);
    let r = cmd_program(&loop_free, "x=true", 2, PathChoice::Auto);
    assert_eq!(r.exit_code, EXIT_OK);
    assert_eq!(r.payload["solver_path"], "interpreter");

    assert_eq!(cmd_program(&p, "b9=true", 2, PathChoice::Auto).exit_code, EXIT_INPUT);
}

#[test]
fn structured_output_is_json() {
    let f = Files::new();
    let r = cmd_check_priority(&f.put("prop.txt", PROPERTY_CONDITION));
    let v: Value = serde_json::from_str(&r.render(Format::Structured)).unwrap();
    assert_eq!(v["command"], "check-priority");
    assert_eq!(v["exit_code"], 0);
    assert_eq!(v["payload"]["ordering"], json!(["a", "b"]));
    // determinism
    assert_eq!(r.render(Format::Structured), cmd_check_priority(&f.path("prop.txt")).render(Format::Structured));
}
