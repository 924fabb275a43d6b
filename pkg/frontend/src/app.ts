/** Application shell: wires the tree, tabs, level selector, and API together. */

import {
  ApiError,
  getFinding,
  getFindings,
  postExplanation,
  postFeedback,
} from "./api.js";
import type { Explanation, ExperienceLevel, FindingDetail, FindingLeaf } from "./api.js";
import {
  renderDataFlow,
  renderExplanation,
  renderExplanationEmpty,
  renderExplanationError,
  renderExplanationLoading,
  renderResults,
} from "./panes.js";
import { renderTree } from "./tree.js";

export type Tab = "results" | "explanation" | "dataflow";

interface UiState {
  selectedFingerprint: string | null;
  finding: FindingDetail | null;
  explanation: Explanation | null;
  activeTab: Tab;
  level: ExperienceLevel;
  /** Tag of the newest in-flight request per pane; stale responses are dropped. */
  pendingRequests: Map<string, number>;
}

let requestCounter = 0;

export function createApp(root: HTMLElement) {
  root.innerHTML = `
    <div class="layout">
      <aside id="tree-pane" aria-label="findings"></aside>
      <main>
        <nav class="toolbar">
          <div role="tablist">
            <button type="button" role="tab" data-tab="results" aria-selected="true">Results</button>
            <button type="button" role="tab" data-tab="explanation" aria-selected="false">Explanation</button>
            <button type="button" role="tab" data-tab="dataflow" aria-selected="false">Data-flow</button>
          </div>
          <label>
            Experience level
            <select id="level-select">
              <option value="beginner" selected>beginner</option>
              <option value="intermediate">intermediate</option>
              <option value="advanced">advanced</option>
            </select>
          </label>
        </nav>
        <section id="detail-pane" role="tabpanel">
          <p class="empty-state">select a finding</p>
        </section>
      </main>
    </div>
  `;

  const treePane = root.querySelector<HTMLElement>("#tree-pane")!;
  const detailPane = root.querySelector<HTMLElement>("#detail-pane")!;
  const levelSelect = root.querySelector<HTMLSelectElement>("#level-select")!;
  const tabs = Array.from(root.querySelectorAll<HTMLButtonElement>("[role=tab]"));

  const state: UiState = {
    selectedFingerprint: null,
    finding: null,
    explanation: null,
    activeTab: "results",
    level: "beginner",
    pendingRequests: new Map(),
  };

  function beginRequest(pane: string): number {
    const tag = ++requestCounter;
    state.pendingRequests.set(pane, tag);
    return tag;
  }

  function isCurrent(pane: string, tag: number): boolean {
    return state.pendingRequests.get(pane) === tag;
  }

  function renderActiveTab(): void {
    for (const tab of tabs) {
      tab.setAttribute("aria-selected", String(tab.dataset.tab === state.activeTab));
    }
    if (!state.finding) {
      detailPane.innerHTML = '<p class="empty-state">select a finding</p>';
      return;
    }
    if (state.activeTab === "results") {
      renderResults(detailPane, state.finding);
    } else if (state.activeTab === "dataflow") {
      renderDataFlow(detailPane, state.finding);
    } else if (state.explanation) {
      renderExplanation(detailPane, state.explanation, {
        onThumbs: (thumbs) =>
          postFeedback(state.finding!.fingerprint, { level: state.level, thumbs }).then(() => {}),
      });
    } else {
      renderExplanationEmpty(detailPane, () => void fetchExplanation());
    }
  }

  async function fetchExplanation(): Promise<void> {
    if (!state.selectedFingerprint) return;
    const fingerprint = state.selectedFingerprint;
    const tag = beginRequest("explanation");
    if (state.activeTab === "explanation") renderExplanationLoading(detailPane);
    try {
      const explanation = await postExplanation(fingerprint, state.level);
      if (!isCurrent("explanation", tag) || state.selectedFingerprint !== fingerprint) return;
      state.explanation = explanation;
    } catch (error) {
      if (!isCurrent("explanation", tag) || state.selectedFingerprint !== fingerprint) return;
      state.explanation = null;
      if (state.activeTab === "explanation") {
        const message = error instanceof ApiError ? error.message : "request failed";
        renderExplanationError(detailPane, message, () => void fetchExplanation());
      }
      return;
    }
    if (state.activeTab === "explanation") renderActiveTab();
  }

  async function selectFinding(leaf: FindingLeaf): Promise<void> {
    state.selectedFingerprint = leaf.fingerprint;
    state.explanation = null;
    state.activeTab = "results";
    const tag = beginRequest("finding");
    detailPane.innerHTML = '<p class="loading-state">loading…</p>';
    try {
      const finding = await getFinding(leaf.fingerprint);
      if (!isCurrent("finding", tag)) return; // superseded selection
      state.finding = finding;
    } catch (error) {
      if (!isCurrent("finding", tag)) return;
      state.finding = null;
      const message = error instanceof ApiError ? error.message : "request failed";
      detailPane.innerHTML = "";
      renderExplanationError(detailPane, message, () => void selectFinding(leaf));
      return;
    }
    renderActiveTab();
  }

  async function loadScan(scanId: string): Promise<void> {
    const tag = beginRequest("tree");
    treePane.innerHTML = '<p class="loading-state">loading…</p>';
    try {
      const tree = await getFindings(scanId);
      if (!isCurrent("tree", tag)) return;
      renderTree(treePane, tree, { onSelect: (leaf) => void selectFinding(leaf) });
    } catch (error) {
      if (!isCurrent("tree", tag)) return;
      const message = error instanceof ApiError ? error.message : "request failed";
      treePane.innerHTML = "";
      renderExplanationError(treePane, message, () => void loadScan(scanId));
    }
  }

  for (const tab of tabs) {
    tab.addEventListener("click", () => {
      state.activeTab = tab.dataset.tab as Tab;
      renderActiveTab();
      // Explanations are fetched only via the explicit button, never on tab switch.
    });
  }

  levelSelect.addEventListener("change", () => {
    state.level = levelSelect.value as ExperienceLevel;
    // A level change invalidates only the explanation pane; the tree and the
    // selected finding stay untouched. Refetch only if one was already shown.
    if (state.explanation) {
      state.explanation = null;
      void fetchExplanation();
    } else if (state.activeTab === "explanation") {
      renderActiveTab();
    }
  });

  return { loadScan, state };
}
