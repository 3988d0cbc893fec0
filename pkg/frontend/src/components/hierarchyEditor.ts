/** Criteria tree editor.
 *
 * Works on a private copy of the hierarchy document and reports every
 * mutation upward; the caller owns persistence, so invalid intermediate
 * states stay visible with the service's own messages anchored to nodes.
 * Renaming changes only the label, never the id, which keeps evaluations
 * and mappings attached to the criterion.
 */

import type { ApiErrorItem, NodeDoc } from "../types.js";
import { el, clear } from "../dom.js";
import { judgmentPair } from "./matrixView.js";

export interface HierarchyEditorOptions {
  hierarchy: NodeDoc;
  onChange?: (hierarchy: NodeDoc) => void;
  onSelect?: (path: string, node: NodeDoc) => void;
  confirmFn?: (message: string) => boolean;
  promptFn?: (message: string, current: string) => string | null;
}

function deepCopy<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

function toMatrix(n: number, judgments: number[]): number[][] {
  const m = Array.from({ length: n }, (_, i) =>
    Array.from({ length: n }, (_, j): number => (i === j ? 1 : 0)),
  );
  judgments.forEach((value, k) => {
    const [i, j] = judgmentPair(n, k);
    const row = m[i];
    const mirror = m[j];
    if (row) row[j] = value;
    if (mirror) mirror[i] = 1 / value;
  });
  return m;
}

function toJudgments(m: number[][]): number[] {
  const n = m.length;
  const out: number[] = [];
  for (let i = 0; i < n; i += 1) {
    for (let j = i + 1; j < n; j += 1) {
      out.push(m[i]?.[j] ?? 1);
    }
  }
  return out;
}

export class HierarchyEditor {
  readonly root: HTMLElement;

  private readonly opts: HierarchyEditorOptions;
  private doc: NodeDoc;
  private counter = 0;

  constructor(opts: HierarchyEditorOptions) {
    this.opts = opts;
    this.doc = deepCopy(opts.hierarchy);
    this.root = el("section", { class: "hierarchy-editor" });
    this.render();
  }

  /** Current (possibly edited) hierarchy document. */
  get hierarchy(): NodeDoc {
    return this.doc;
  }

  setHierarchy(hierarchy: NodeDoc): void {
    this.doc = deepCopy(hierarchy);
    this.render();
  }

  private render(): void {
    clear(this.root);
    this.root.append(this.renderNode(this.doc, "hierarchy", null));
  }

  private renderNode(node: NodeDoc, path: string, parent: NodeDoc | null): HTMLElement {
    const item = el("li", { class: "tree-node", "data-path": path });
    const row = el("div", { class: "tree-row" });
    row.append(el("span", { class: "tree-label" }, [node.label]));
    if (node.children) {
      row.append(el("span", { class: "tree-kind" }, ["branch"]));
    } else if (node.kind) {
      row.append(el("span", { class: "tree-kind" }, [node.kind]));
    }

    const rename = el("button", { type: "button", class: "rename" }, ["rename"]);
    rename.addEventListener("click", () => this.rename(node));
    row.append(rename);

    const add = el("button", { type: "button", class: "add-child" }, ["add child"]);
    add.addEventListener("click", () => this.addChild(node));
    row.append(add);

    if (parent) {
      const remove = el("button", { type: "button", class: "delete" }, ["delete"]);
      remove.addEventListener("click", () => this.remove(parent, node));
      row.append(remove);
    }

    if (node.children) {
      const pick = el("button", { type: "button", class: "pick-matrix" }, ["judgments"]);
      pick.addEventListener("click", () => this.opts.onSelect?.(path, node));
      row.append(pick);
    }

    item.append(row);
    item.append(el("div", { class: "node-errors" }));

    if (node.children) {
      const list = el("ul", { class: "tree-children" });
      node.children.forEach((child, i) => {
        list.append(this.renderNode(child, `${path}.children.${i}`, node));
      });
      item.append(list);
    }
    const wrapper = path === "hierarchy" ? el("ul", { class: "tree-root" }) : null;
    if (wrapper) {
      wrapper.append(item);
      return wrapper;
    }
    return item;
  }

  private changed(): void {
    this.render();
    this.opts.onChange?.(deepCopy(this.doc));
  }

  private rename(node: NodeDoc): void {
    const promptFn =
      this.opts.promptFn ?? ((message: string, current: string) => window.prompt(message, current));
    const next = promptFn(`rename ${node.label}`, node.label);
    if (next === null || next === "" || next === node.label) return;
    node.label = next;
    this.changed();
  }

  private freshId(): string {
    const taken = new Set<string>();
    const walk = (n: NodeDoc) => {
      taken.add(n.id);
      n.children?.forEach(walk);
    };
    walk(this.doc);
    let id = "";
    do {
      this.counter += 1;
      id = `criterion-${this.counter}`;
    } while (taken.has(id));
    return id;
  }

  private addChild(node: NodeDoc): void {
    const leaf: NodeDoc = {
      id: this.freshId(),
      label: "new criterion",
      kind: "quantitative",
    };
    if (!node.children) {
      // a leaf grows into a branch; the comparison matrix starts as identity
      delete node.kind;
      node.children = [leaf];
      node.judgments = [];
    } else {
      const n = node.children.length;
      const matrix = toMatrix(n, node.judgments ?? []);
      for (const row of matrix) row.push(1);
      matrix.push(Array.from({ length: n + 1 }, () => 1));
      node.children.push(leaf);
      node.judgments = toJudgments(matrix);
    }
    this.changed();
  }

  private remove(parent: NodeDoc, node: NodeDoc): void {
    const confirmFn = this.opts.confirmFn ?? ((message: string) => window.confirm(message));
    const hasChildren = Boolean(node.children?.length);
    if (hasChildren && !confirmFn(`delete ${node.label} and its children?`)) {
      return;
    }
    const children = parent.children ?? [];
    const index = children.indexOf(node);
    if (index < 0) return;
    const matrix = toMatrix(children.length, parent.judgments ?? []);
    matrix.splice(index, 1);
    for (const row of matrix) row.splice(index, 1);
    children.splice(index, 1);
    parent.judgments = toJudgments(matrix);
    this.changed();
  }

  /** Anchor service messages to the nodes their paths point at. */
  showErrors(items: ApiErrorItem[]): void {
    for (const slot of Array.from(this.root.querySelectorAll(".node-errors"))) {
      clear(slot);
    }
    for (const item of items) {
      if (!item.path.startsWith("hierarchy")) continue;
      let best: Element | null = null;
      let bestLen = -1;
      for (const nodeEl of Array.from(this.root.querySelectorAll("[data-path]"))) {
        const path = nodeEl.getAttribute("data-path") ?? "";
        if (item.path.startsWith(path) && path.length > bestLen) {
          best = nodeEl;
          bestLen = path.length;
        }
      }
      const slot = best?.querySelector(".node-errors");
      if (slot) {
        slot.append(el("p", { class: "error" }, [`${item.path}: ${item.message}`]));
      }
    }
  }
}
