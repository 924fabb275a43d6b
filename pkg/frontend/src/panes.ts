/** Detail panes: Results (snippet + metadata), Explanation, Data-flow. */

import type { Explanation, FindingDetail } from "./api.js";

function chip(text: string, kind: string): HTMLElement {
  const span = document.createElement("span");
  span.className = `chip chip-${kind}`;
  span.textContent = text;
  return span;
}

function section(heading: string, body: string): HTMLElement {
  const wrapper = document.createElement("section");
  wrapper.className = `explanation-section section-${heading.toLowerCase()}`;
  const title = document.createElement("h3");
  title.textContent = heading;
  const text = document.createElement("p");
  text.textContent = body;
  wrapper.append(title, text);
  return wrapper;
}

export function renderResults(container: HTMLElement, finding: FindingDetail): void {
  container.textContent = "";

  const header = document.createElement("div");
  header.className = "detail-header";
  header.appendChild(chip(finding.severity, "severity"));
  if (finding.cwe) header.appendChild(chip(`${finding.cwe.cwe_id} ${finding.cwe.name}`, "cwe"));
  header.appendChild(chip(`confidence: ${finding.tool_confidence}`, "confidence"));

  const message = document.createElement("p");
  message.className = "finding-message";
  message.textContent = finding.message;

  const where = document.createElement("p");
  where.className = "finding-location";
  where.textContent = `${finding.location.file_uri}:${finding.location.start_line} (${finding.rule_name})`;

  const snippet = document.createElement("pre");
  snippet.className = "code-snippet";
  snippet.textContent =
    finding.context.extraction_mode === "Unavailable"
      ? "source not available"
      : finding.context.enclosing_source;

  container.append(header, message, where, snippet);

  if (finding.critical_methods.length > 0) {
    const list = document.createElement("ul");
    list.className = "critical-methods";
    for (const method of finding.critical_methods) {
      const item = document.createElement("li");
      item.textContent = `${method.qualified_name} — ${method.category}`;
      list.appendChild(item);
    }
    container.appendChild(list);
  }
}

export interface ExplanationCallbacks {
  onThumbs: (thumbs: "Up" | "Down") => Promise<void>;
}

export function renderExplanationLoading(container: HTMLElement): void {
  container.textContent = "";
  const loading = document.createElement("p");
  loading.className = "loading-state";
  loading.textContent = "generating explanation…";
  container.appendChild(loading);
}

export function renderExplanationEmpty(container: HTMLElement, onExplain: () => void): void {
  container.textContent = "";
  const button = document.createElement("button");
  button.type = "button";
  button.id = "explain-button";
  button.textContent = "Explain this finding";
  button.addEventListener("click", onExplain);
  container.appendChild(button);
}

export function renderExplanationError(container: HTMLElement, message: string, onRetry: () => void): void {
  container.textContent = "";
  const banner = document.createElement("p");
  banner.className = "error-banner";
  banner.textContent = message;
  const retry = document.createElement("button");
  retry.type = "button";
  retry.className = "retry-button";
  retry.textContent = "Retry";
  retry.addEventListener("click", onRetry);
  container.append(banner, retry);
}

export function renderExplanation(
  container: HTMLElement,
  explanation: Explanation,
  callbacks: ExplanationCallbacks,
): void {
  container.textContent = "";

  const header = document.createElement("div");
  header.className = "detail-header";
  header.appendChild(chip(explanation.vulnerability_type, "type"));
  header.appendChild(chip(explanation.severity, "severity"));
  header.appendChild(chip(`confidence: ${explanation.tool_confidence}`, "confidence"));
  container.appendChild(header);

  if (!explanation.parse_ok) {
    const banner = document.createElement("p");
    banner.className = "warning-banner";
    banner.textContent = "The model reply did not match the expected structure; showing raw text.";
    const raw = document.createElement("pre");
    raw.className = "raw-text";
    raw.textContent = explanation.raw_text;
    container.append(banner, raw);
  } else {
    container.appendChild(section("Cause", explanation.cause));
    container.appendChild(section("Impact", explanation.impact));
    container.appendChild(section("Mitigation", explanation.mitigation));
  }

  if (explanation.general_mitigations.length > 0) {
    const heading = document.createElement("h3");
    heading.textContent = "General mitigations";
    const list = document.createElement("ul");
    list.className = "general-mitigations";
    for (const entry of explanation.general_mitigations) {
      const item = document.createElement("li");
      item.textContent = entry;
      list.appendChild(item);
    }
    container.append(heading, list);
  }

  const feedback = document.createElement("div");
  feedback.className = "feedback-controls";
  for (const thumbs of ["Up", "Down"] as const) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = `thumbs thumbs-${thumbs.toLowerCase()}`;
    button.textContent = thumbs === "Up" ? "👍" : "👎";
    button.setAttribute("aria-label", `thumbs ${thumbs.toLowerCase()}`);
    button.addEventListener("click", () => {
      // Disable both immediately so only one POST can ever be issued.
      for (const b of feedback.querySelectorAll("button")) b.disabled = true;
      void callbacks.onThumbs(thumbs).catch(() => {
        for (const b of feedback.querySelectorAll("button")) b.disabled = false;
      });
    });
    feedback.appendChild(button);
  }
  container.appendChild(feedback);
}

export function renderDataFlow(container: HTMLElement, finding: FindingDetail): void {
  container.textContent = "";
  const flow = finding.data_flow;
  if (!flow) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "no data-flow reported";
    container.appendChild(empty);
    return;
  }

  const list = document.createElement("ol");
  list.className = "data-flow";
  const steps = [
    { role: "source", step: flow.source },
    ...flow.intermediates.map((step) => ({ role: "intermediate", step })),
    { role: "sink", step: flow.sink },
  ];
  for (const { role, step } of steps) {
    const item = document.createElement("li");
    item.className = `flow-step flow-${role}`;
    const where = document.createElement("span");
    where.className = "flow-location";
    where.textContent = `[${role}] ${step.location.file_uri}:${step.location.start_line}`;
    const code = document.createElement("code");
    code.textContent = step.snippet ?? "";
    item.append(where, code);
    list.appendChild(item);
  }
  container.appendChild(list);
}
