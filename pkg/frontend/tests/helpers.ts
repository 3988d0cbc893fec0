import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import { fmt } from "../src/format.js";
import type { FetchLike } from "../src/api.js";

export function fixture<T>(name: string): T {
  const file = resolve(process.cwd(), "tests", "fixtures", `${name}.json`);
  return JSON.parse(readFileSync(file, "utf8")) as T;
}

/** Every number in a JSON document, in display form. */
export function collectNumbers(value: unknown, out: Set<string>): Set<string> {
  if (typeof value === "number") {
    out.add(fmt(value));
    out.add(String(value));
  } else if (Array.isArray(value)) {
    for (const item of value) collectNumbers(item, out);
  } else if (typeof value === "object" && value !== null) {
    for (const item of Object.values(value)) collectNumbers(item, out);
  }
  return out;
}

export function allowedNumbers(...docs: unknown[]): Set<string> {
  const out = new Set<string>();
  for (const doc of docs) collectNumbers(doc, out);
  return out;
}

// standalone numbers only: digits inside identifiers like HD1 or pcr6
// belong to names, not to rendered quantities
const NUMBER_TOKEN = /(?<![\w.])-?\d+(?:\.\d+)?(?:e[+-]?\d+)?(?![\w.])/gi;

function textNodeValues(root: Node): string[] {
  const out: string[] = [];
  const walk = (node: Node) => {
    if (node.nodeType === 3 && node.nodeValue) out.push(node.nodeValue);
    node.childNodes.forEach(walk);
  };
  walk(root);
  return out;
}

/** Numeric tokens, taken per text node so element boundaries stay intact. */
export function numericTokens(root: Node | string): string[] {
  const chunks = typeof root === "string" ? [root] : textNodeValues(root);
  const tokens: string[] = [];
  for (const chunk of chunks) {
    tokens.push(...Array.from(chunk.matchAll(NUMBER_TOKEN), (m) => m[0]));
  }
  return tokens;
}

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

export interface FakeRoute {
  /** Substring the URL must contain. */
  match: string;
  status?: number;
  body: unknown;
}

/** Fetch stand-in that replays fixture bodies and records each call. */
export function fakeFetch(routes: FakeRoute[]): { fetchFn: FetchLike; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const fetchFn: FetchLike = (url, init) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    });
    const route = routes.find((r) => url.includes(r.match));
    if (!route) {
      throw new Error(`no fake route for ${url}`);
    }
    const status = route.status ?? 200;
    const response = {
      ok: status >= 200 && status < 300,
      status,
      json: () => Promise.resolve(route.body),
    };
    return Promise.resolve(response as unknown as Response);
  };
  return { fetchFn, calls };
}

/** Let queued promise callbacks run. */
export async function flush(): Promise<void> {
  for (let i = 0; i < 5; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
