/** API payloads mirroring the server's fixture scan and replay explanation. */

import type { Explanation, FindingDetail, FindingsTree } from "../src/api.js";

export const FIXTURE_TREE: FindingsTree = {
  group: "rule",
  branches: [
    {
      label: "no-direct-response-writer",
      findings: [
        {
          fingerprint: "aaaa000011112222",
          rule_name: "no-direct-response-writer",
          severity: "Medium",
          message: "Untrusted input flows to the response writer.",
          file_uri: "XssServlet.java",
          start_line: 22,
        },
        {
          fingerprint: "bbbb000011112222",
          rule_name: "no-direct-response-writer",
          severity: "Medium",
          message: "Untrusted input flows to the response writer.",
          file_uri: "XssServlet.java",
          start_line: 27,
        },
      ],
    },
    {
      label: "jdbc-sqli",
      findings: [
        {
          fingerprint: "cccc000011112222",
          rule_name: "jdbc-sqli",
          severity: "High",
          message: "User input concatenated into a SQL query.",
          file_uri: "SqliServlet.java",
          start_line: 19,
        },
      ],
    },
  ],
};

export const FIXTURE_FINDING: FindingDetail = {
  fingerprint: "aaaa000011112222",
  rule_id: "java.lang.security.audit.xss.no-direct-response-writer",
  rule_name: "no-direct-response-writer",
  message: "Untrusted input flows to the response writer.",
  severity: "Medium",
  location: { file_uri: "XssServlet.java", start_line: 22 },
  context: {
    enclosing_source:
      '    protected void doPost(HttpServletRequest req, HttpServletResponse resp) {\n        writer.println(markup);\n    }',
    flagged_line_text: "        writer.println(markup);",
    flagged_line_number: 22,
    extraction_mode: "SyntaxAware",
    truncated: false,
  },
  data_flow: {
    source: {
      location: { file_uri: "XssServlet.java", start_line: 11 },
      snippet: 'String name = req.getParameter("name");',
    },
    intermediates: [
      {
        location: { file_uri: "XssServlet.java", start_line: 15 },
        snippet: "String markup = buildGreeting(name);",
      },
    ],
    sink: {
      location: { file_uri: "XssServlet.java", start_line: 22 },
      snippet: "writer.println(markup);",
    },
  },
  cwe: {
    cwe_id: "CWE-79",
    name: "Cross-site Scripting",
    summary: "Improper neutralization of input during web page generation.",
    rank: 1,
  },
  critical_methods: [
    { qualified_name: "javax.servlet.ServletRequest.getParameter", category: "Source", note: null },
  ],
  tool_name: "semgrep",
  tool_confidence: "HIGH",
};

export function fixtureExplanation(level: Explanation["level"]): Explanation {
  return {
    finding_fingerprint: "aaaa000011112222",
    level,
    cause: "The servlet writes the request parameter to the response without encoding.",
    impact: "An attacker can run script in the victim's browser session.",
    mitigation: "Encode the value with an HTML entity encoder before writing it.",
    vulnerability_type: "CWE-79 Cross-site Scripting",
    severity: "Medium",
    tool_confidence: "HIGH",
    general_mitigations: ["Validate input against an allow-list.", "Encode output for the HTML context."],
    raw_text: "## Cause\n…\n## Impact\n…\n## Mitigation\n…",
    model_id: "gpt-4o",
    parse_ok: true,
  };
}
