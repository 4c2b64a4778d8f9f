// Debounced suggestion list: exact rows first, approximate rows in italics.
(() => {
  const WAIT_MS = 120;
  const K = 10;
  const input = document.getElementById("q");
  const list = document.getElementById("list");
  const next = document.getElementById("next");
  const took = document.getElementById("took");
  const toast = document.getElementById("toast");
  let timer = null;
  let token = 0;
  let inflight = null;
  let page = 0;
  let active = -1;
  let rows = [];

  function render(res) {
    list.replaceChildren();
    rows = res.suggestions;
    active = -1;
    rows.forEach((s, i) => {
      const li = document.createElement("li");
      li.className = s.exact ? "exact" : "approx";
      const w = document.createElement("span");
      w.textContent = s.word;
      const sc = document.createElement("span");
      sc.className = "score";
      sc.textContent = s.score;
      li.append(w, sc);
      li.addEventListener("click", () => choose(i));
      list.append(li);
    });
    next.hidden = !res.has_more;
    took.textContent = `${res.took_us} µs`;
  }

  function showError(msg) {
    list.replaceChildren();
    const li = document.createElement("li");
    li.className = "error";
    li.textContent = msg;
    list.append(li);
    next.hidden = true;
  }

  async function fetchPage() {
    const q = input.value.trim();
    const mine = ++token;
    // one request at a time: a newer query cancels the older one
    if (inflight) inflight.abort();
    inflight = null;
    if (!q) {
      list.replaceChildren();
      next.hidden = true;
      took.textContent = "";
      return;
    }
    try {
      inflight = new AbortController();
      const r = await fetch(`/suggest?q=${encodeURIComponent(q)}&k=${K}&page=${page}`, { signal: inflight.signal });
      if (mine !== token) return;
      inflight = null;
      if (!r.ok) throw new Error(`server said ${r.status}`);
      render(await r.json());
    } catch (e) {
      if (mine === token && e.name !== "AbortError") showError(String(e.message || e));
    }
  }

  function flash(msg) {
    toast.textContent = msg;
    toast.hidden = false;
    setTimeout(() => { toast.hidden = true; }, 2500);
  }

  async function choose(i) {
    const s = rows[i];
    if (!s) return;
    input.value = s.word;
    try {
      const r = await fetch("/select", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ word: s.word }),
      });
      if (!r.ok) flash(r.status === 404 ? `unknown word ${s.word}` : `select failed (${r.status})`);
    } catch (e) {
      flash(String(e.message || e));
    }
  }

  function highlight(i) {
    const items = list.querySelectorAll("li");
    items.forEach((li, j) => li.classList.toggle("active", j === i));
    active = i;
  }

  input.addEventListener("input", () => {
    page = 0;
    clearTimeout(timer);
    timer = setTimeout(fetchPage, WAIT_MS);
  });

  input.addEventListener("keydown", (ev) => {
    if (ev.key === "ArrowDown" && rows.length) {
      ev.preventDefault();
      highlight((active + 1) % rows.length);
    } else if (ev.key === "ArrowUp" && rows.length) {
      ev.preventDefault();
      highlight((active - 1 + rows.length) % rows.length);
    } else if (ev.key === "Enter" && active >= 0) {
      ev.preventDefault();
      choose(active);
    } else if (ev.key === "ArrowRight" && ev.ctrlKey && !next.hidden) {
      ev.preventDefault();
      next.click();
    }
  });

  next.addEventListener("click", () => {
    page += 1;
    fetchPage();
  });
})();
