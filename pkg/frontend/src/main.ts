import { ApiClient } from "./api.js";
import { ExplorerController } from "./controller.js";
import { debounce } from "./debounce.js";
import { PHI_MAX, PHI_MIN, PHI_STEP, TAU_MAX, TAU_MIN } from "./state.js";
import {
  renderBanner,
  renderGapPlan,
  renderPathways,
  renderSearchResults,
  renderSourceCard,
} from "./view.js";

const $ = <T extends HTMLElement>(selector: string): T => {
  const el = document.querySelector<T>(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el;
};

function init(): void {
  const api = new ApiClient("");
  const resultsEl = $("#search-results");
  const pathwaysEl = $("#pathways");
  const planEl = $("#gap-plan");
  const bannerEl = $("#banner");
  const sourceEl = $("#source-card");
  const tauInput = $<HTMLInputElement>("#tau");
  const phiInput = $<HTMLInputElement>("#phi");
  const tauValue = $("#tau-value");
  const phiValue = $("#phi-value");

  tauInput.min = String(TAU_MIN);
  tauInput.max = String(TAU_MAX);
  tauInput.step = "1";
  phiInput.min = String(PHI_MIN);
  phiInput.max = String(PHI_MAX);
  phiInput.step = String(PHI_STEP);

  const controller = new ExplorerController(api, (state) => {
    sourceEl.innerHTML = renderSourceCard(state);
    pathwaysEl.innerHTML = renderPathways(state);
    planEl.innerHTML = renderGapPlan(state.gapPlan);
    bannerEl.innerHTML = renderBanner(state);
    tauInput.value = String(state.tau);
    phiInput.value = String(state.phi);
    tauValue.textContent = String(state.tau);
    phiValue.textContent = state.phi.toFixed(2);
  });

  const searchInput = $<HTMLInputElement>("#search");
  const runSearch = debounce(async () => {
    const query = searchInput.value.trim();
    if (!query) {
      resultsEl.innerHTML = "";
      return;
    }
    try {
      const items = await controller.search(query);
      resultsEl.innerHTML = renderSearchResults(items);
      if (items.length === 1) void controller.selectJob(items[0].id);
    } catch {
      bannerEl.innerHTML = `<div class="banner">service unreachable</div>`;
    }
  }, 200);
  searchInput.addEventListener("input", () => runSearch());

  resultsEl.addEventListener("click", (ev) => {
    const button = (ev.target as HTMLElement).closest<HTMLElement>(".pick-job");
    if (button?.dataset.id) void controller.selectJob(button.dataset.id);
  });

  pathwaysEl.addEventListener("click", (ev) => {
    const button = (ev.target as HTMLElement).closest<HTMLElement>(".pick-destination");
    if (button?.dataset.target) void controller.inspectDestination(button.dataset.target);
  });

  const onSlider = () =>
    controller.adjustThresholds(Number(tauInput.value), Number(phiInput.value));
  tauInput.addEventListener("input", onSlider);
  phiInput.addEventListener("input", onSlider);

  const profileForm = $<HTMLFormElement>("#profile-form");
  profileForm.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const activities = $<HTMLInputElement>("#profile-activities")
      .value.split(",")
      .map((s) => s.trim())
      .filter(Boolean);
    const rhoRaw = $<HTMLInputElement>("#profile-rho").value.trim();
    const rho = rhoRaw === "" ? null : Number(rhoRaw);
    if (activities.length) void controller.composeProfile(activities, rho);
  });

  void api
    .meta()
    .then((meta) => {
      $("#meta").textContent =
        `${meta.n_jobs} jobs · ${meta.n_activities} skills · bundle ${meta.digest.slice(0, 12)}`;
    })
    .catch(() => {
      bannerEl.innerHTML = `<div class="banner">service unreachable</div>`;
    });
}

document.addEventListener("DOMContentLoaded", init);
