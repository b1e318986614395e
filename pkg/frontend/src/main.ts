import { ApiClient } from "./api.js";
import { Workbench } from "./render.js";

function param(name: string, fallback: string): string {
  const value = new URLSearchParams(window.location.search).get(name);
  return value !== null && value !== "" ? value : fallback;
}

const annotator = param("annotator", "anonymous");
const round = param("round", "consensus") === "independent"
  ? ("independent" as const)
  : ("consensus" as const);

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app container");
}
const workbench = new Workbench(new ApiClient(""), root, annotator, round);
void workbench.start();
