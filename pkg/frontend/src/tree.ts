/** Findings tree: branches per rule (or file), leaves labeled "file:line — message". */

import type { FindingLeaf, FindingsTree } from "./api.js";

export interface TreeCallbacks {
  onSelect: (leaf: FindingLeaf) => void;
}

export function leafLabel(leaf: FindingLeaf): string {
  return `${leaf.file_uri}:${leaf.start_line} — ${leaf.message}`;
}

export function renderTree(container: HTMLElement, tree: FindingsTree, callbacks: TreeCallbacks): void {
  container.textContent = "";
  if (tree.branches.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "no findings";
    container.appendChild(empty);
    return;
  }

  const root = document.createElement("ul");
  root.className = "tree";
  root.setAttribute("role", "tree");

  for (const branch of tree.branches) {
    const branchItem = document.createElement("li");
    branchItem.className = "tree-branch";
    branchItem.setAttribute("role", "treeitem");
    branchItem.setAttribute("aria-expanded", "true");

    const toggle = document.createElement("button");
    toggle.type = "button";
    toggle.className = "branch-toggle";
    toggle.textContent = `${branch.label} (${branch.findings.length})`;

    const leafList = document.createElement("ul");
    leafList.className = "tree-leaves";
    leafList.setAttribute("role", "group");

    toggle.addEventListener("click", () => {
      const expanded = branchItem.getAttribute("aria-expanded") === "true";
      branchItem.setAttribute("aria-expanded", String(!expanded));
      leafList.hidden = expanded;
    });

    for (const leaf of branch.findings) {
      const leafItem = document.createElement("li");
      leafItem.setAttribute("role", "treeitem");

      const button = document.createElement("button");
      button.type = "button";
      button.className = `tree-leaf severity-${leaf.severity.toLowerCase()}`;
      button.dataset.fingerprint = leaf.fingerprint;
      button.textContent = leafLabel(leaf);
      button.addEventListener("click", () => {
        for (const other of container.querySelectorAll(".tree-leaf.selected")) {
          other.classList.remove("selected");
        }
        button.classList.add("selected");
        callbacks.onSelect(leaf);
      });

      leafItem.appendChild(button);
      leafList.appendChild(leafItem);
    }

    branchItem.appendChild(toggle);
    branchItem.appendChild(leafList);
    root.appendChild(branchItem);
  }

  // Arrow keys walk every visible button (branch toggles and leaves) in order.
  root.addEventListener("keydown", (event) => {
    if (event.key !== "ArrowDown" && event.key !== "ArrowUp") return;
    const visible = Array.from(
      root.querySelectorAll<HTMLButtonElement>("button"),
    ).filter((b) => b.offsetParent !== null || !b.closest("ul")?.hidden);
    const index = visible.indexOf(document.activeElement as HTMLButtonElement);
    if (index === -1) return;
    event.preventDefault();
    const next = event.key === "ArrowDown" ? index + 1 : index - 1;
    visible[Math.max(0, Math.min(visible.length - 1, next))].focus();
  });

  container.appendChild(root);
}
