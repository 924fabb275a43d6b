/** Typed client for the sastwb JSON API. The UI talks to nothing else. */

export type Severity = "High" | "Medium" | "Low";
export type ExperienceLevel = "beginner" | "intermediate" | "advanced";

export interface FindingLeaf {
  fingerprint: string;
  rule_name: string;
  severity: Severity;
  message: string;
  file_uri: string;
  start_line: number;
}

export interface FindingsTree {
  group: "rule" | "file";
  branches: { label: string; findings: FindingLeaf[] }[];
}

export interface FlowStep {
  location: { file_uri: string; start_line: number };
  snippet: string | null;
}

export interface FindingDetail {
  fingerprint: string;
  rule_id: string;
  rule_name: string;
  message: string;
  severity: Severity;
  location: { file_uri: string; start_line: number };
  context: {
    enclosing_source: string;
    flagged_line_text: string;
    flagged_line_number: number;
    extraction_mode: "SyntaxAware" | "LineWindow" | "Unavailable";
    truncated: boolean;
  };
  data_flow: { source: FlowStep; intermediates: FlowStep[]; sink: FlowStep } | null;
  cwe: { cwe_id: string; name: string; summary: string; rank: number | null } | null;
  critical_methods: { qualified_name: string; category: string; note: string | null }[];
  tool_name: string;
  tool_confidence: string;
}

export interface Explanation {
  finding_fingerprint: string;
  level: ExperienceLevel;
  cause: string;
  impact: string;
  mitigation: string;
  vulnerability_type: string;
  severity: string;
  tool_confidence: string;
  general_mitigations: string[];
  raw_text: string;
  model_id: string;
  parse_ok: boolean;
}

export interface FeedbackBody {
  level: ExperienceLevel;
  thumbs: "Up" | "Down";
  criteria?: Record<string, number>;
  comment?: string;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.error === "string") detail = body.error;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export function getFindings(scanId: string, group: "rule" | "file" = "rule"): Promise<FindingsTree> {
  return request(`/scans/${encodeURIComponent(scanId)}/findings?group=${group}`);
}

export function getFinding(fingerprint: string): Promise<FindingDetail> {
  return request(`/findings/${encodeURIComponent(fingerprint)}`);
}

export function postExplanation(
  fingerprint: string,
  level: ExperienceLevel,
  validate = false,
): Promise<Explanation> {
  return request(`/findings/${encodeURIComponent(fingerprint)}/explanation`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ level, validate }),
  });
}

export function postFeedback(fingerprint: string, body: FeedbackBody): Promise<{ feedback_id: string }> {
  return request(`/findings/${encodeURIComponent(fingerprint)}/feedback`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
}
