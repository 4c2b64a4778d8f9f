//! Building all indexes from a dictionary file and round-tripping the index file.

use lexis::autocomplete::Method;
use lexis::{Engine, EngineConfig, SearchMethod};

fn main() -> lexis::Result<()> {
    let dir = std::env::temp_dir().join(format!("lexis-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let dict = dir.join("words.txt");
    std::fs::write(&dict, "cat#4\ncut#2\ncar#9\ncart\nscat#1\nx\ncat#3\n")?;

    let (engine, diags) = Engine::from_dict_file(&dict, EngineConfig::default())?;
    for d in diags {
        println!("note: {d}");
    }
    let index = dir.join("words.lexis");
    engine.save(&index)?;
    let loaded = Engine::load(&index)?;
    println!("index file {} bytes", std::fs::metadata(&index)?.len());
    for m in SearchMethod::ALL {
        println!("{m:>9} cxt -> {:?}", loaded.search_words("cxt", m)?);
    }
    let page = loaded.complete("ca", 10, 1, Method::Naive, 0)?;
    for s in page.suggestions {
        println!("{:>6} {:>3} {}", s.word, s.score, if s.exact { "exact" } else { "fuzzy" });
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
